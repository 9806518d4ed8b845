#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "fixtures.hpp"
#include "gaborface/errors.hpp"
#include "gaborface/similarity.hpp"
#include "oracles.hpp"

using namespace gaborface;

namespace {

CodedImage coded(const std::string& id, std::uint64_t seed, double scale = 1.0) {
  auto img = oracle::textured_image(96, 96, seed).scaled(scale);
  return code_image(img, FilterBank::standard(), fixtures::scattered_placement(id, {96, 96}, 100));
}

CodedImage constant_jets(const std::string& id, std::vector<double> amps) {
  std::vector<CodedPoint> points;
  for (const auto& n : GridTemplate::standard().node_names) points.push_back({n, 1, 1, {amps}});
  auto bank = FilterBank::build(std::vector<double>{1.0, 0.5}, std::vector<double>{0.0}, 3.0);
  return CodedImage(id, bank, std::move(points));
}

}  // namespace

TEST(JetSimilarity, NormalizedDotProduct) {
  JetVector a{{1, 2, 2}}, b{{2, 0, 1}};
  EXPECT_NEAR(jet_similarity(a, b), 4.0 / (3.0 * std::sqrt(5.0)), 1e-15);
  EXPECT_DOUBLE_EQ(jet_similarity(a, a), 1.0);
  EXPECT_DOUBLE_EQ(jet_similarity(JetVector{{1, 0}}, JetVector{{0, 1}}), 0.0);
  EXPECT_THROW(jet_similarity(a, JetVector{{1, 2}}), IncompatibleError);
  EXPECT_THROW(jet_similarity(a, JetVector{{0, 0, 0}}), DegenerateError);
}

TEST(ImageSimilarity, SelfIsOneAndSymmetric) {
  auto a = coded("a", 1), b = coded("b", 2);
  EXPECT_NEAR(gabor_image_similarity(a, a), 1.0, 1e-12);
  EXPECT_DOUBLE_EQ(gabor_image_similarity(a, b), gabor_image_similarity(b, a));
  const double s = gabor_image_similarity(a, b);
  EXPECT_GT(s, 0.0);
  EXPECT_LT(s, 1.0);
}

TEST(ImageSimilarity, InvariantToIlluminationScale) {
  auto a = coded("a", 1), b = coded("b", 2);
  const double base = gabor_image_similarity(a, b);
  for (double c : {0.5, 2.0, 10.0}) EXPECT_NEAR(gabor_image_similarity(coded("b", 2, c), a), base, 1e-9);
}

TEST(ImageSimilarity, ZeroJetCountsAsDegenerate) {
  auto a = constant_jets("a", {1, 1});
  auto z = constant_jets("z", {0, 0});
  SimilarityDiagnostics diag;
  EXPECT_EQ(gabor_image_similarity(a, z, &diag), 0.0);
  EXPECT_EQ(diag.degenerate_points, 34);
}

TEST(ImageSimilarity, RejectsDifferentBanks) {
  auto a = coded("a", 1);
  auto b = constant_jets("b", {1, 1});
  EXPECT_THROW(gabor_image_similarity(a, b), IncompatibleError);
}

TEST(CodedImage, Validation) {
  EXPECT_THROW(constant_jets("a", {1, 1, 1}), FormatError);
  EXPECT_THROW(constant_jets("a", {1, -1}), FormatError);
  auto img = oracle::textured_image(64, 64, 1);
  EXPECT_THROW(code_image(img, FilterBank::standard(), fixtures::scattered_placement("p", {65, 64}, 1)),
               IncompatibleError);
}

TEST(CodedImage, JsonRoundTripIsExact) {
  auto a = coded("a", 3);
  auto back = coded_image_from_json(coded_image_to_json(a));
  EXPECT_EQ(back.image_id(), "a");
  EXPECT_EQ(back.fingerprint(), a.fingerprint());
  ASSERT_EQ(back.points().size(), a.points().size());
  for (std::size_t i = 0; i < a.points().size(); ++i) {
    EXPECT_EQ(back.points()[i].name, a.points()[i].name);
    EXPECT_EQ(back.points()[i].jet, a.points()[i].jet);
  }
  EXPECT_THROW(coded_image_from_json("[]"), FormatError);
}

TEST(CodedImage, ThreadCountDoesNotChangeJets) {
  auto img = oracle::textured_image(96, 96, 8);
  auto p = fixtures::scattered_placement("a", {96, 96}, 2);
  auto one = code_image(img, FilterBank::standard(), p, 1);
  auto many = code_image(img, FilterBank::standard(), p, 6);
  for (std::size_t i = 0; i < one.points().size(); ++i) EXPECT_EQ(one.points()[i].jet, many.points()[i].jet);
}

TEST(Matrices, GaborAndGeometry) {
  std::vector<CodedImage> images{coded("a", 1), coded("b", 2), coded("c", 3)};
  auto m1 = gabor_matrix(images, 1);
  auto m4 = gabor_matrix(images, 4);
  EXPECT_EQ(m1, m4);
  EXPECT_EQ(m1.kind(), MatrixKind::kSimilarity);
  EXPECT_DOUBLE_EQ(m1(0, 2), gabor_image_similarity(images[0], images[2]));

  std::vector<ShapeVector> shapes{{{0, 0}}, {{3, 4}}, {{6, 8}}};
  auto g = geometry_matrix({"a", "b", "c"}, shapes);
  EXPECT_EQ(g.kind(), MatrixKind::kDissimilarity);
  EXPECT_DOUBLE_EQ(g(0, 1), 5.0);
  EXPECT_DOUBLE_EQ(g(0, 2), 10.0);
  EXPECT_THROW(geometry_dissimilarity(shapes[0], ShapeVector{{1}}), IncompatibleError);
}

TEST(Matrices, ErrorsNameThePair) {
  std::vector<ShapeVector> shapes{{{0, 0}}, {{3}}};
  try {
    geometry_matrix({"p", "q"}, shapes);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("pair (p, q)"), std::string::npos);
  }
}
