#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "gaborface/face_grid.hpp"

namespace gaborface::fixtures {

/// Standard-template placement with nodes scattered inside a central box.
inline GridPlacement scattered_placement(const std::string& id, ImageSize size, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(0.2 * size.width, 0.8 * size.width);
  std::uniform_real_distribution<double> uy(0.2 * size.height, 0.8 * size.height);
  const auto& t = GridTemplate::standard();
  std::vector<GridNode> nodes;
  for (const auto& name : t.node_names) nodes.push_back({name, ux(rng), uy(rng)});
  return GridPlacement(id, std::move(nodes), t.nose_tip, size);
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("gaborface_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace gaborface::fixtures
