#include "gaborface/pair_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "gaborface/errors.hpp"
#include "gaborface/file_io.hpp"
#include "json_util.hpp"

namespace gaborface {

using detail::Json;

std::string_view to_string(MatrixKind kind) {
  return kind == MatrixKind::kSimilarity ? "similarity" : "dissimilarity";
}

MatrixKind parse_matrix_kind(std::string_view text) {
  if (text == "similarity") return MatrixKind::kSimilarity;
  if (text == "dissimilarity") return MatrixKind::kDissimilarity;
  throw FormatError("unknown matrix kind '" + std::string(text) + "'");
}

PairMatrix::PairMatrix(std::vector<std::string> item_ids, MatrixKind kind)
    : item_ids_(std::move(item_ids)), kind_(kind), values_(item_ids_.size() * item_ids_.size(), 0.0) {
  if (std::set<std::string>(item_ids_.begin(), item_ids_.end()).size() != item_ids_.size()) {
    throw ValidationError("pair matrix item ids must be unique");
  }
  const double diag = kind == MatrixKind::kSimilarity ? 1.0 : 0.0;
  for (std::size_t i = 0; i < size(); ++i) values_[i * size() + i] = diag;
}

PairMatrix::PairMatrix(std::vector<std::string> item_ids, MatrixKind kind,
                       std::vector<double> row_major)
    : PairMatrix(std::move(item_ids), kind) {
  const std::size_t n = size();
  if (row_major.size() != n * n) {
    throw FormatError("pair matrix has " + std::to_string(row_major.size()) + " values, expected " +
                      std::to_string(n * n));
  }
  const double diag = kind == MatrixKind::kSimilarity ? 1.0 : 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (row_major[i * n + i] != diag) {
      throw FormatError("pair matrix diagonal entry " + item_ids_[i] + " must be " + format_double(diag));
    }
    for (std::size_t j = 0; j < n; ++j) {
      const double v = row_major[i * n + j];
      if (!std::isfinite(v)) throw FormatError("pair matrix contains a non-finite value");
      if (v != row_major[j * n + i]) {
        throw FormatError("pair matrix is not symmetric at (" + item_ids_[i] + ", " + item_ids_[j] + ")");
      }
    }
  }
  values_ = std::move(row_major);
}

void PairMatrix::set(std::size_t i, std::size_t j, double value) {
  values_[i * size() + j] = value;
  values_[j * size() + i] = value;
}

std::size_t PairMatrix::index_of(std::string_view id) const {
  const auto it = std::find(item_ids_.begin(), item_ids_.end(), id);
  if (it == item_ids_.end()) throw ValidationError("item '" + std::string(id) + "' not in pair matrix");
  return static_cast<std::size_t>(it - item_ids_.begin());
}

PairMatrix PairMatrix::reordered(const std::vector<std::string>& ids) const {
  if (ids.size() != size()) throw ValidationError("reorder needs a permutation of the item ids");
  std::vector<std::size_t> src;
  src.reserve(ids.size());
  for (const auto& id : ids) src.push_back(index_of(id));
  PairMatrix out(ids, kind_);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    for (std::size_t j = i + 1; j < ids.size(); ++j) out.set(i, j, (*this)(src[i], src[j]));
  }
  return out;
}

std::string matrix_to_json(const PairMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.size(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.size(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  Json doc;
  doc["kind"] = std::string(to_string(m.kind()));
  doc["item_ids"] = m.item_ids();
  doc["values"] = std::move(rows);
  return detail::dump(doc);
}

PairMatrix matrix_from_json(std::string_view text) {
  const char* what = "pair matrix";
  const Json doc = detail::parse_json(text, what);
  const MatrixKind kind = parse_matrix_kind(detail::require_string(doc, "kind", what));
  const Json& ids_json = detail::require(doc, "item_ids", what);
  const Json& rows = detail::require(doc, "values", what);
  if (!ids_json.is_array() || !rows.is_array()) throw FormatError("pair matrix: malformed arrays");
  std::vector<std::string> ids;
  for (const auto& id : ids_json) {
    if (!id.is_string()) throw FormatError("pair matrix: item ids must be strings");
    ids.push_back(id.get<std::string>());
  }
  if (rows.size() != ids.size()) throw FormatError("pair matrix: row count differs from item count");
  std::vector<double> values;
  for (const auto& row : rows) {
    if (!row.is_array() || row.size() != ids.size()) throw FormatError("pair matrix: ragged row");
    for (const auto& v : row) {
      if (!v.is_number()) throw FormatError("pair matrix: values must be numbers");
      values.push_back(v.get<double>());
    }
  }
  return PairMatrix(std::move(ids), kind, std::move(values));
}

std::string matrix_to_csv(const PairMatrix& m) {
  std::string out(to_string(m.kind()));
  for (const auto& id : m.item_ids()) out += "," + id;
  out += "\n";
  for (std::size_t i = 0; i < m.size(); ++i) {
    out += m.item_ids()[i];
    for (std::size_t j = 0; j < m.size(); ++j) out += "," + format_double(m(i, j));
    out += "\n";
  }
  return out;
}

}  // namespace gaborface
