#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace gaborface {

enum class MatrixKind { kSimilarity, kDissimilarity };

std::string_view to_string(MatrixKind kind);
MatrixKind parse_matrix_kind(std::string_view text);

/// Symmetric n x n matrix of pairwise values over named items. The diagonal is
/// 1 for similarities and 0 for dissimilarities.
class PairMatrix {
 public:
  PairMatrix(std::vector<std::string> item_ids, MatrixKind kind);

  /// Validates shape, symmetry and the diagonal.
  PairMatrix(std::vector<std::string> item_ids, MatrixKind kind, std::vector<double> row_major);

  std::size_t size() const { return item_ids_.size(); }
  const std::vector<std::string>& item_ids() const { return item_ids_; }
  MatrixKind kind() const { return kind_; }
  const std::vector<double>& values() const { return values_; }

  double operator()(std::size_t i, std::size_t j) const { return values_[i * size() + j]; }

  /// Writes both (i, j) and (j, i).
  void set(std::size_t i, std::size_t j, double value);

  std::size_t index_of(std::string_view id) const;

  /// Same items and values under the permutation `ids` (every id must exist).
  PairMatrix reordered(const std::vector<std::string>& ids) const;

  friend bool operator==(const PairMatrix&, const PairMatrix&) = default;

 private:
  std::vector<std::string> item_ids_;
  MatrixKind kind_;
  std::vector<double> values_;
};

/// JSON {kind, item_ids, values: [[...]]}.
std::string matrix_to_json(const PairMatrix& m);
PairMatrix matrix_from_json(std::string_view text);

/// CSV with item ids as header row and first column; the corner cell holds the kind.
std::string matrix_to_csv(const PairMatrix& m);

}  // namespace gaborface
