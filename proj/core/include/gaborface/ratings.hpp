#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace gaborface {

/// Averaged five-point ratings of one image on each emotion adjective.
struct RatingVector {
  std::string image_id;
  std::vector<std::string> adjectives;
  std::vector<double> values;
};

struct RatingTable {
  std::vector<std::string> adjectives;
  std::vector<RatingVector> rows;

  const RatingVector* find(std::string_view image_id) const;
};

/// Parses `image_id,<5 or 6 adjective columns>` CSV. Errors carry the
/// 1-based line and column of the offending cell.
RatingTable load_ratings(std::string_view csv_text);
RatingTable load_ratings_file(const std::string& path);

std::string ratings_to_csv(const RatingTable& table);

/// Removes one adjective column; a no-op when the column is absent.
RatingTable drop_adjective(const RatingTable& table, std::string_view adjective);

double semantic_dissimilarity(const RatingVector& a, const RatingVector& b);

}  // namespace gaborface
