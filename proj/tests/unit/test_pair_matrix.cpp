#include <gtest/gtest.h>

#include <cmath>

#include "gaborface/errors.hpp"
#include "gaborface/pair_matrix.hpp"

using namespace gaborface;

TEST(PairMatrix, DiagonalAndSymmetricSet) {
  PairMatrix s({"a", "b", "c"}, MatrixKind::kSimilarity);
  EXPECT_EQ(s(1, 1), 1.0);
  s.set(0, 2, 0.25);
  EXPECT_EQ(s(2, 0), 0.25);
  PairMatrix d({"a", "b"}, MatrixKind::kDissimilarity);
  EXPECT_EQ(d(0, 0), 0.0);
  EXPECT_THROW(PairMatrix({"a", "a"}, MatrixKind::kSimilarity), ValidationError);
}

TEST(PairMatrix, ValidatingConstructor) {
  EXPECT_NO_THROW(PairMatrix({"a", "b"}, MatrixKind::kDissimilarity, {0, 2, 2, 0}));
  EXPECT_THROW(PairMatrix({"a", "b"}, MatrixKind::kDissimilarity, {0, 2, 3, 0}), FormatError);
  EXPECT_THROW(PairMatrix({"a", "b"}, MatrixKind::kDissimilarity, {1, 2, 2, 0}), FormatError);
  EXPECT_THROW(PairMatrix({"a", "b"}, MatrixKind::kDissimilarity, {0, 2, 2}), FormatError);
  EXPECT_THROW(PairMatrix({"a", "b"}, MatrixKind::kSimilarity, {1, NAN, NAN, 1}), FormatError);
}

TEST(PairMatrix, Reorder) {
  PairMatrix m({"a", "b", "c"}, MatrixKind::kDissimilarity, {0, 1, 2, 1, 0, 3, 2, 3, 0});
  auto r = m.reordered({"c", "a", "b"});
  EXPECT_EQ(r.item_ids(), (std::vector<std::string>{"c", "a", "b"}));
  EXPECT_EQ(r(0, 1), 2.0);
  EXPECT_EQ(r(0, 2), 3.0);
  EXPECT_EQ(r(1, 2), 1.0);
  EXPECT_EQ(m.index_of("c"), 2u);
  EXPECT_THROW(m.index_of("z"), ValidationError);
  EXPECT_THROW(m.reordered({"a", "b"}), ValidationError);
}

TEST(PairMatrix, JsonRoundTripIsExact) {
  PairMatrix m({"x1", "x2", "x3"}, MatrixKind::kSimilarity);
  m.set(0, 1, 0.1 + 0.2);
  m.set(0, 2, 1.0 / 3.0);
  m.set(1, 2, 0.987654321012345);
  EXPECT_EQ(matrix_from_json(matrix_to_json(m)), m);
  EXPECT_THROW(matrix_from_json(R"({"kind": "distance", "item_ids": [], "values": []})"), FormatError);
  EXPECT_THROW(matrix_from_json(R"({"kind": "similarity", "item_ids": ["a"], "values": [[1, 2]]})"),
               FormatError);
}

TEST(PairMatrix, Csv) {
  PairMatrix m({"a", "b"}, MatrixKind::kDissimilarity, {0, 0.5, 0.5, 0});
  EXPECT_EQ(matrix_to_csv(m), "dissimilarity,a,b\na,0,0.5\nb,0.5,0\n");
  EXPECT_EQ(parse_matrix_kind("similarity"), MatrixKind::kSimilarity);
  EXPECT_EQ(to_string(MatrixKind::kDissimilarity), "dissimilarity");
}
