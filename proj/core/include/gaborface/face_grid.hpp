#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "gaborface/image.hpp"

namespace gaborface {

inline constexpr std::size_t kGridNodeCount = 34;

struct GridNode {
  std::string name;
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const GridNode&, const GridNode&) = default;
};

struct ImageSize {
  int width = 0;
  int height = 0;

  friend bool operator==(const ImageSize&, const ImageSize&) = default;
};

/// The 34 named fiducial points placed on one image.
class GridPlacement {
 public:
  /// Validates node count, name uniqueness, nose tip and coordinate ranges.
  GridPlacement(std::string image_id, std::vector<GridNode> nodes, std::string nose_tip,
                ImageSize source_size);

  const std::string& image_id() const { return image_id_; }
  const std::vector<GridNode>& nodes() const { return nodes_; }
  const std::string& nose_tip() const { return nose_tip_; }
  ImageSize source_size() const { return source_size_; }

  std::size_t nose_index() const { return nose_index_; }
  std::vector<std::string> node_names() const;
  Point2 position(std::size_t i) const { return {nodes_[i].x, nodes_[i].y}; }

  friend bool operator==(const GridPlacement&, const GridPlacement&) = default;

 private:
  std::string image_id_;
  std::vector<GridNode> nodes_;
  std::string nose_tip_;
  ImageSize source_size_;
  std::size_t nose_index_ = 0;
};

/// Distances (pixels) of every non-nose node from the nose tip, template order.
struct ShapeVector {
  std::vector<double> distances;

  std::size_t size() const { return distances.size(); }
};

/// Node naming shared by every placement in a study.
struct GridTemplate {
  std::string version;
  std::vector<std::string> node_names;
  std::string nose_tip;

  /// The template bundled with the library (also installed as grid_template.json).
  static const GridTemplate& standard();

  /// Throws ValidationError when `p` does not follow this template's node order.
  void check(const GridPlacement& p) const;
};

GridTemplate parse_grid_template(std::string_view json_text);

/// Parses a grid JSON document:
///   {"image_id": .., "source_size": [w, h], "nose_tip": "..", "nodes": [{"name", "x", "y"}, ...]}
GridPlacement load_grid(std::string_view json_text);
GridPlacement load_grid_file(const std::filesystem::path& path);
std::string grid_to_json(const GridPlacement& p);

GridPlacement rescale_placement(const GridPlacement& p, ImageSize target);

ShapeVector geometry_vector(const GridPlacement& p);

}  // namespace gaborface
