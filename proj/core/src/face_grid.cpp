#include "gaborface/face_grid.hpp"

#include <cmath>
#include <set>

#include "gaborface/errors.hpp"
#include "gaborface/file_io.hpp"
#include "json_util.hpp"

namespace gaborface {

using detail::Json;

GridPlacement::GridPlacement(std::string image_id, std::vector<GridNode> nodes,
                             std::string nose_tip, ImageSize source_size)
    : image_id_(std::move(image_id)),
      nodes_(std::move(nodes)),
      nose_tip_(std::move(nose_tip)),
      source_size_(source_size) {
  if (nodes_.size() != kGridNodeCount) {
    throw FormatError("expected " + std::to_string(kGridNodeCount) + " nodes, found " +
                      std::to_string(nodes_.size()));
  }
  if (source_size_.width < 1 || source_size_.height < 1) {
    throw FormatError("source_size must be at least 1x1");
  }
  std::set<std::string> seen;
  bool found_nose = false;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const GridNode& n = nodes_[i];
    const std::string where = "nodes[" + std::to_string(i) + "]";
    if (n.name.empty()) throw FormatError(where + ".name is empty");
    if (!seen.insert(n.name).second) throw FormatError(where + ".name: duplicate node name '" + n.name + "'");
    if (!(std::isfinite(n.x) && n.x >= 0.0 && n.x < source_size_.width)) {
      throw FormatError(where + ".x: coordinate " + format_double(n.x) + " outside [0, " +
                        std::to_string(source_size_.width) + ")");
    }
    if (!(std::isfinite(n.y) && n.y >= 0.0 && n.y < source_size_.height)) {
      throw FormatError(where + ".y: coordinate " + format_double(n.y) + " outside [0, " +
                        std::to_string(source_size_.height) + ")");
    }
    if (n.name == nose_tip_) {
      nose_index_ = i;
      found_nose = true;
    }
  }
  if (!found_nose) throw FormatError("nose_tip: '" + nose_tip_ + "' does not name a node");
}

std::vector<std::string> GridPlacement::node_names() const {
  std::vector<std::string> names;
  names.reserve(nodes_.size());
  for (const auto& n : nodes_) names.push_back(n.name);
  return names;
}

const GridTemplate& GridTemplate::standard() {
  static const GridTemplate kStandard{
      "gaborface-grid-34/1",
      {"forehead_left", "forehead_center", "forehead_right",
       "brow_left_outer", "brow_left_middle", "brow_left_inner",
       "brow_right_inner", "brow_right_middle", "brow_right_outer",
       "eye_left_outer", "eye_left_upper", "eye_left_inner", "eye_left_lower",
       "eye_right_inner", "eye_right_upper", "eye_right_outer", "eye_right_lower",
       "nose_bridge", "nose_tip", "nostril_left", "nostril_right",
       "cheek_left", "cheek_right",
       "mouth_left", "lip_upper_left", "lip_upper_center", "lip_upper_right", "mouth_right",
       "lip_lower_right", "lip_lower_center", "lip_lower_left",
       "jaw_left", "chin", "jaw_right"},
      "nose_tip"};
  return kStandard;
}

void GridTemplate::check(const GridPlacement& p) const {
  if (p.nose_tip() != nose_tip) {
    throw ValidationError("grid " + p.image_id() + ": nose_tip '" + p.nose_tip() +
                          "' differs from template '" + nose_tip + "'");
  }
  const auto& nodes = p.nodes();
  if (nodes.size() != node_names.size()) {
    throw ValidationError("grid " + p.image_id() + ": node count differs from template");
  }
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].name != node_names[i]) {
      throw ValidationError("grid " + p.image_id() + ": nodes[" + std::to_string(i) + "] is '" +
                            nodes[i].name + "', template expects '" + node_names[i] + "'");
    }
  }
}

GridTemplate parse_grid_template(std::string_view json_text) {
  const Json doc = detail::parse_json(json_text, "grid template");
  GridTemplate t;
  t.version = detail::require_string(doc, "version", "grid template");
  t.nose_tip = detail::require_string(doc, "nose_tip", "grid template");
  const Json& names = detail::require(doc, "node_names", "grid template");
  if (!names.is_array()) throw FormatError("grid template: node_names must be an array");
  for (const auto& n : names) {
    if (!n.is_string()) throw FormatError("grid template: node_names entries must be strings");
    t.node_names.push_back(n.get<std::string>());
  }
  if (t.node_names.size() != kGridNodeCount) {
    throw FormatError("grid template: expected " + std::to_string(kGridNodeCount) +
                      " nodes, found " + std::to_string(t.node_names.size()));
  }
  if (std::set<std::string>(t.node_names.begin(), t.node_names.end()).size() != t.node_names.size()) {
    throw FormatError("grid template: duplicate node name");
  }
  if (std::find(t.node_names.begin(), t.node_names.end(), t.nose_tip) == t.node_names.end()) {
    throw FormatError("grid template: nose_tip does not name a node");
  }
  return t;
}

GridPlacement load_grid(std::string_view json_text) {
  const char* what = "grid";
  const Json doc = detail::parse_json(json_text, what);
  std::string image_id = detail::require_string(doc, "image_id", what);
  const Json& size = detail::require(doc, "source_size", what);
  if (!size.is_array() || size.size() != 2 || !size[0].is_number_integer() ||
      !size[1].is_number_integer()) {
    throw FormatError("grid " + image_id + ": source_size must be [width, height] integers");
  }
  const ImageSize source{size[0].get<int>(), size[1].get<int>()};
  std::string nose = detail::require_string(doc, "nose_tip", what);
  const Json& nodes_json = detail::require(doc, "nodes", what);
  if (!nodes_json.is_array()) throw FormatError("grid " + image_id + ": nodes must be an array");

  std::vector<GridNode> nodes;
  nodes.reserve(nodes_json.size());
  for (std::size_t i = 0; i < nodes_json.size(); ++i) {
    const std::string where = "grid " + image_id + ": nodes[" + std::to_string(i) + "]";
    const Json& n = nodes_json[i];
    nodes.push_back({detail::require_string(n, "name", where), detail::require_number(n, "x", where),
                     detail::require_number(n, "y", where)});
  }
  try {
    return GridPlacement(std::move(image_id), std::move(nodes), std::move(nose), source);
  } catch (const FormatError& e) {
    throw FormatError("grid " + doc.at("image_id").get<std::string>() + ": " + e.what());
  }
}

GridPlacement load_grid_file(const std::filesystem::path& path) {
  return load_grid(read_text_file(path));
}

std::string grid_to_json(const GridPlacement& p) {
  Json nodes = Json::array();
  for (const auto& n : p.nodes()) nodes.push_back({{"name", n.name}, {"x", n.x}, {"y", n.y}});
  Json doc;
  doc["image_id"] = p.image_id();
  doc["source_size"] = {p.source_size().width, p.source_size().height};
  doc["nose_tip"] = p.nose_tip();
  doc["nodes"] = std::move(nodes);
  return detail::dump(doc);
}

GridPlacement rescale_placement(const GridPlacement& p, ImageSize target) {
  if (target.width < 1 || target.height < 1) throw ValidationError("rescale target must be at least 1x1");
  if (target == p.source_size()) return p;
  const double sx = static_cast<double>(target.width) / p.source_size().width;
  const double sy = static_cast<double>(target.height) / p.source_size().height;
  std::vector<GridNode> nodes = p.nodes();
  for (auto& n : nodes) {
    n.x = std::min(n.x * sx, std::nextafter(static_cast<double>(target.width), 0.0));
    n.y = std::min(n.y * sy, std::nextafter(static_cast<double>(target.height), 0.0));
  }
  return GridPlacement(p.image_id(), std::move(nodes), p.nose_tip(), target);
}

ShapeVector geometry_vector(const GridPlacement& p) {
  const Point2 nose = p.position(p.nose_index());
  ShapeVector v;
  v.distances.reserve(p.nodes().size() - 1);
  for (std::size_t i = 0; i < p.nodes().size(); ++i) {
    if (i == p.nose_index()) continue;
    const Point2 q = p.position(i);
    v.distances.push_back(std::hypot(q.x - nose.x, q.y - nose.y));
  }
  return v;
}

}  // namespace gaborface
