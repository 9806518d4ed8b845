#pragma once

#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gaborface/errors.hpp"
#include "gaborface/face_grid.hpp"
#include "gaborface/gabor_bank.hpp"
#include "gaborface/pair_matrix.hpp"
#include "gaborface/parallel.hpp"

namespace gaborface {

struct CodedPoint {
  std::string name;
  double x = 0.0;
  double y = 0.0;
  JetVector jet;
};

/// Jets of one image at every grid node, in template order, tagged with the
/// bank that produced them.
class CodedImage {
 public:
  CodedImage(std::string image_id, FilterBank bank, std::vector<CodedPoint> points);

  const std::string& image_id() const { return image_id_; }
  const FilterBank& bank() const { return bank_; }
  const std::string& fingerprint() const { return fingerprint_; }
  const std::vector<CodedPoint>& points() const { return points_; }

 private:
  std::string image_id_;
  FilterBank bank_;
  std::string fingerprint_;
  std::vector<CodedPoint> points_;
};

/// Computes the jet at every node of `placement`; the placement must already be
/// expressed in the image's pixel frame.
CodedImage code_image(const ImageRaster& image, const FilterBank& bank,
                      const GridPlacement& placement, unsigned threads = 1);

/// Jet-set JSON: {image_id, bank: {wavenumbers, orientations, sigma},
///                points: [{name, x, y, amplitudes}]}.
std::string coded_image_to_json(const CodedImage& coded);
CodedImage coded_image_from_json(std::string_view text);

/// Normalized dot product. Throws DegenerateError if either jet is all zero
/// and IncompatibleError on a dimension mismatch.
double jet_similarity(const JetVector& a, const JetVector& b);

struct SimilarityDiagnostics {
  /// Node pairs where a zero jet forced the per-point similarity to 0.
  int degenerate_points = 0;
};

/// Mean of per-node jet similarities. A node pair involving an all-zero jet
/// contributes 0 and is counted in `diagnostics`.
double gabor_image_similarity(const CodedImage& a, const CodedImage& b,
                              SimilarityDiagnostics* diagnostics = nullptr);

double geometry_dissimilarity(const ShapeVector& a, const ShapeVector& b);

/// Fills the upper triangle with measure(i, j) and mirrors it. Pairs are
/// evaluated independently, so the result does not depend on `threads`.
template <typename Measure>
PairMatrix pairwise_matrix(std::vector<std::string> item_ids, MatrixKind kind, Measure&& measure,
                           unsigned threads = 1) {
  const std::size_t n = item_ids.size();
  if (n < 2) throw ValidationError("pairwise matrix needs at least 2 items");
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  pairs.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);

  std::vector<double> upper(pairs.size());
  parallel_for(pairs.size(), threads, [&](std::size_t p) {
    const auto [i, j] = pairs[p];
    try {
      upper[p] = measure(i, j);
    } catch (const ValidationError& e) {
      throw ValidationError("pair (" + item_ids[i] + ", " + item_ids[j] + "): " + e.what());
    } catch (const Error& e) {
      throw Error("pair (" + item_ids[i] + ", " + item_ids[j] + "): " + e.what());
    }
  });

  PairMatrix m(std::move(item_ids), kind);
  for (std::size_t p = 0; p < pairs.size(); ++p) m.set(pairs[p].first, pairs[p].second, upper[p]);
  return m;
}

PairMatrix gabor_matrix(std::span<const CodedImage> images, unsigned threads = 1,
                        SimilarityDiagnostics* diagnostics = nullptr);

PairMatrix geometry_matrix(std::vector<std::string> item_ids, std::span<const ShapeVector> shapes,
                           unsigned threads = 1);

}  // namespace gaborface
