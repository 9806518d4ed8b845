#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace gaborface::synth {

/// Parameters of a synthetic study: textured face-like images whose features
/// are displaced by a smooth deformation field scaled by a per-image strength
/// t in [0, 1]. Ratings are increasing functions of t.
struct SyntheticStudySpec {
  std::vector<std::string> expressers{"SY"};
  int images_per_expresser = 10;
  int size = 256;
  std::uint64_t seed = 7;
};

struct SyntheticImage {
  std::string image_id;
  std::string expresser;
  std::string expression;
  double strength = 0.0;
};

/// Writes images/, grids/, ratings.csv and study.json under `root` and returns
/// the generated image descriptions (in id order).
std::vector<SyntheticImage> write_synthetic_study(const std::filesystem::path& root,
                                                  const SyntheticStudySpec& spec);

}  // namespace gaborface::synth
