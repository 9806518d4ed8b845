#include "gaborface/ratings.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>

#include "gaborface/errors.hpp"
#include "gaborface/file_io.hpp"

namespace gaborface {

namespace {

constexpr double kScaleMin = 1.0;
constexpr double kScaleMax = 5.0;

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_cells(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    cells.push_back(trim(line.substr(start, comma == std::string_view::npos ? comma : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

std::string location(std::size_t line, std::size_t column) {
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

}  // namespace

const RatingVector* RatingTable::find(std::string_view image_id) const {
  const auto it = std::find_if(rows.begin(), rows.end(),
                               [&](const RatingVector& r) { return r.image_id == image_id; });
  return it == rows.end() ? nullptr : &*it;
}

RatingTable load_ratings(std::string_view csv_text) {
  if (csv_text.starts_with("\xEF\xBB\xBF")) csv_text.remove_prefix(3);
  RatingTable table;
  std::size_t line_no = 0;
  bool have_header = false;
  std::set<std::string> seen_ids;
  while (!csv_text.empty()) {
    const std::size_t nl = csv_text.find('\n');
    const std::string_view line = csv_text.substr(0, nl);
    csv_text.remove_prefix(nl == std::string_view::npos ? csv_text.size() : nl + 1);
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split_cells(line);

    if (!have_header) {
      if (cells[0] != "image_id") {
        throw FormatError("ratings " + location(line_no, 1) + ": first header column must be image_id");
      }
      const std::size_t n = cells.size() - 1;
      if (n != 5 && n != 6) {
        throw FormatError("ratings line " + std::to_string(line_no) + ": expected 5 or 6 adjective columns, found " +
                          std::to_string(n));
      }
      for (std::size_t c = 1; c < cells.size(); ++c) {
        if (cells[c].empty()) throw FormatError("ratings " + location(line_no, c + 1) + ": empty column name");
        table.adjectives.emplace_back(cells[c]);
      }
      if (std::set<std::string>(table.adjectives.begin(), table.adjectives.end()).size() !=
          table.adjectives.size()) {
        throw FormatError("ratings line " + std::to_string(line_no) + ": duplicate adjective column");
      }
      have_header = true;
      continue;
    }

    if (cells.size() != table.adjectives.size() + 1) {
      throw FormatError("ratings line " + std::to_string(line_no) + ": expected " +
                        std::to_string(table.adjectives.size() + 1) + " cells, found " +
                        std::to_string(cells.size()));
    }
    RatingVector row;
    row.image_id = std::string(cells[0]);
    if (row.image_id.empty()) throw FormatError("ratings " + location(line_no, 1) + ": missing image_id");
    if (!seen_ids.insert(row.image_id).second) {
      throw FormatError("ratings " + location(line_no, 1) + ": duplicate image_id '" + row.image_id + "'");
    }
    row.adjectives = table.adjectives;
    for (std::size_t c = 1; c < cells.size(); ++c) {
      const std::string_view cell = cells[c];
      if (cell.empty()) throw FormatError("ratings " + location(line_no, c + 1) + ": missing value");
      double v = 0.0;
      const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (res.ec != std::errc() || res.ptr != cell.data() + cell.size() || !std::isfinite(v)) {
        throw FormatError("ratings " + location(line_no, c + 1) + ": '" + std::string(cell) +
                          "' is not a number");
      }
      if (v < kScaleMin || v > kScaleMax) {
        throw FormatError("ratings " + location(line_no, c + 1) + ": value " + std::string(cell) +
                          " outside the 1-5 rating scale");
      }
      row.values.push_back(v);
    }
    table.rows.push_back(std::move(row));
  }
  if (!have_header) throw FormatError("ratings: empty table");
  return table;
}

RatingTable load_ratings_file(const std::string& path) {
  try {
    return load_ratings(read_text_file(path));
  } catch (const FormatError& e) {
    throw FormatError(path + ": " + e.what());
  }
}

std::string ratings_to_csv(const RatingTable& table) {
  std::string out = "image_id";
  for (const auto& a : table.adjectives) out += "," + a;
  out += "\n";
  for (const auto& row : table.rows) {
    out += row.image_id;
    for (double v : row.values) out += "," + format_double(v);
    out += "\n";
  }
  return out;
}

RatingTable drop_adjective(const RatingTable& table, std::string_view adjective) {
  const auto it = std::find(table.adjectives.begin(), table.adjectives.end(), adjective);
  if (it == table.adjectives.end()) return table;
  const auto col = static_cast<std::size_t>(it - table.adjectives.begin());
  RatingTable out;
  out.adjectives = table.adjectives;
  out.adjectives.erase(out.adjectives.begin() + static_cast<std::ptrdiff_t>(col));
  for (const auto& row : table.rows) {
    RatingVector r{row.image_id, out.adjectives, row.values};
    r.values.erase(r.values.begin() + static_cast<std::ptrdiff_t>(col));
    out.rows.push_back(std::move(r));
  }
  return out;
}

double semantic_dissimilarity(const RatingVector& a, const RatingVector& b) {
  if (a.adjectives != b.adjectives || a.values.size() != b.values.size()) {
    throw IncompatibleError("rating vectors " + a.image_id + " and " + b.image_id +
                            " use different adjective lists");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    const double d = a.values[i] - b.values[i];
    sum += d * d;
  }
  return std::sqrt(sum);
}

}  // namespace gaborface
