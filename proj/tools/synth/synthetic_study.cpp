#include "synthetic_study.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <nlohmann/json.hpp>
#include <numeric>
#include <random>

#include "gaborface/face_grid.hpp"
#include "gaborface/file_io.hpp"
#include "gaborface/image.hpp"

namespace gaborface::synth {

namespace {

struct Spot {
  double x, y, sigma, amplitude;
};

struct Bump {
  double x, y, sigma, dx, dy;
};

// Template node positions in unit face coordinates, template order.
constexpr std::array<std::array<double, 2>, kGridNodeCount> kNodeLayout{{
    {0.38, 0.20}, {0.50, 0.18}, {0.62, 0.20},
    {0.30, 0.32}, {0.37, 0.30}, {0.44, 0.32},
    {0.56, 0.32}, {0.63, 0.30}, {0.70, 0.32},
    {0.31, 0.40}, {0.37, 0.38}, {0.43, 0.40}, {0.37, 0.42},
    {0.57, 0.40}, {0.63, 0.38}, {0.69, 0.40}, {0.63, 0.42},
    {0.50, 0.42}, {0.50, 0.55}, {0.46, 0.58}, {0.54, 0.58},
    {0.33, 0.56}, {0.67, 0.56},
    {0.41, 0.70}, {0.45, 0.68}, {0.50, 0.67}, {0.55, 0.68}, {0.59, 0.70},
    {0.55, 0.73}, {0.50, 0.74}, {0.45, 0.73},
    {0.36, 0.80}, {0.50, 0.86}, {0.64, 0.80},
}};

// Smile-like deformation: mouth corners out and up, lower lip down, brows and cheeks up.
constexpr std::array<Bump, 9> kDeformation{{
    {0.41, 0.70, 0.05, -0.040, -0.030},
    {0.59, 0.70, 0.05, 0.040, -0.030},
    {0.50, 0.74, 0.04, 0.000, 0.030},
    {0.37, 0.30, 0.06, 0.000, -0.030},
    {0.63, 0.30, 0.06, 0.000, -0.030},
    {0.33, 0.56, 0.06, 0.000, -0.020},
    {0.67, 0.56, 0.06, 0.000, -0.020},
    {0.37, 0.40, 0.04, 0.000, -0.010},
    {0.63, 0.40, 0.04, 0.000, -0.010},
}};

constexpr std::array<const char*, 7> kExpressions{"NE", "HA", "SA", "SU", "AN", "DI", "FE"};

class Face {
 public:
  Face(std::mt19937_64& rng) {
    // Facial features: dark blobs along brows, eyes, nostrils and lips.
    auto line = [&](double x0, double y0, double x1, double y1, int count, double sigma, double amp) {
      for (int i = 0; i < count; ++i) {
        const double f = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
        spots_.push_back({x0 + f * (x1 - x0), y0 + f * (y1 - y0), sigma, amp});
      }
    };
    line(0.30, 0.32, 0.44, 0.32, 5, 0.012, -60);
    line(0.56, 0.32, 0.70, 0.32, 5, 0.012, -60);
    line(0.32, 0.40, 0.42, 0.40, 3, 0.018, -80);
    line(0.58, 0.40, 0.68, 0.40, 3, 0.018, -80);
    line(0.46, 0.58, 0.54, 0.58, 2, 0.012, -50);
    line(0.42, 0.70, 0.58, 0.70, 6, 0.012, -70);
    line(0.45, 0.73, 0.55, 0.73, 3, 0.012, 30);
    std::uniform_real_distribution<double> pos(0.28, 0.72), width(0.010, 0.030), amp(-30.0, 30.0);
    for (int i = 0; i < 60; ++i) spots_.push_back({pos(rng), 0.15 + (pos(rng) - 0.28) * 1.6, width(rng), amp(rng)});
  }

  double intensity(double u, double v) const {
    const double r = std::hypot((u - 0.5) / 0.26, (v - 0.52) / 0.38);
    double value = 60.0 + 95.0 / (1.0 + std::exp((r - 1.0) * 25.0));
    for (const Spot& s : spots_) {
      const double d2 = (u - s.x) * (u - s.x) + (v - s.y) * (v - s.y);
      value += s.amplitude * std::exp(-d2 / (2 * s.sigma * s.sigma));
    }
    return std::clamp(value, 0.0, 255.0);
  }

 private:
  std::vector<Spot> spots_;
};

std::array<double, 2> displacement(double u, double v) {
  std::array<double, 2> d{0.0, 0.0};
  for (const Bump& b : kDeformation) {
    const double w = std::exp(-((u - b.x) * (u - b.x) + (v - b.y) * (v - b.y)) / (2 * b.sigma * b.sigma));
    d[0] += w * b.dx;
    d[1] += w * b.dy;
  }
  return d;
}

std::string two_digits(int i) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%02d", i);
  return buf;
}

}  // namespace

std::vector<SyntheticImage> write_synthetic_study(const std::filesystem::path& root,
                                                  const SyntheticStudySpec& spec) {
  using nlohmann::json;
  const auto& names = GridTemplate::standard().node_names;
  const double scale = spec.size;
  std::vector<SyntheticImage> out;
  json expressers = json::object(), expressions = json::object();
  std::string ratings = "image_id,happiness,sadness,surprise,anger,disgust,fear\n";

  std::mt19937_64 rng(spec.seed);
  for (const auto& expresser : spec.expressers) {
    const Face face(rng);
    const int n = spec.images_per_expresser;
    std::vector<int> slot(static_cast<std::size_t>(n));
    std::iota(slot.begin(), slot.end(), 0);
    std::shuffle(slot.begin(), slot.end(), rng);

    for (int i = 0; i < n; ++i) {
      const double t = n == 1 ? 0.0 : static_cast<double>(slot[static_cast<std::size_t>(i)]) / (n - 1);
      SyntheticImage info{expresser + two_digits(i), expresser, kExpressions[static_cast<std::size_t>(i) % 7], t};

      std::vector<double> pixels(static_cast<std::size_t>(spec.size) * spec.size);
      for (int row = 0; row < spec.size; ++row) {
        for (int col = 0; col < spec.size; ++col) {
          const double u = col / scale, v = row / scale;
          const auto d = displacement(u, v);
          pixels[static_cast<std::size_t>(row) * spec.size + col] = face.intensity(u - t * d[0], v - t * d[1]);
        }
      }
      write_file_atomic(root / "images" / (info.image_id + ".pgm"),
                        encode_pgm(ImageRaster(spec.size, spec.size, std::move(pixels))));

      json nodes = json::array();
      for (std::size_t k = 0; k < kGridNodeCount; ++k) {
        const auto [u, v] = kNodeLayout[k];
        const auto d = displacement(u, v);
        nodes.push_back({{"name", names[k]}, {"x", (u + t * d[0]) * scale}, {"y", (v + t * d[1]) * scale}});
      }
      const json grid{{"image_id", info.image_id},
                      {"source_size", {spec.size, spec.size}},
                      {"nose_tip", GridTemplate::standard().nose_tip},
                      {"nodes", std::move(nodes)}};
      write_file_atomic(root / "grids" / (info.image_id + ".json"), grid.dump(2) + "\n");

      const double r[] = {1 + 4 * t, 5 - 3 * t, 1 + 2 * t, 2.0, 2 - t, 1.5 + 0.5 * t};
      ratings += info.image_id;
      for (double x : r) ratings += "," + format_double(x);
      ratings += "\n";

      expressers[info.image_id] = expresser;
      expressions[info.image_id] = info.expression;
      out.push_back(std::move(info));
    }
  }
  write_file_atomic(root / "ratings.csv", ratings);
  const json config{{"images", "images"},   {"grids", "grids"},         {"ratings", "ratings.csv"},
                    {"output", "out"},      {"expressers", expressers}, {"expressions", expressions},
                    {"options", {{"seed", spec.seed}, {"standard_size", {spec.size, spec.size}}}}};
  write_file_atomic(root / "study.json", config.dump(2) + "\n");
  return out;
}

}  // namespace gaborface::synth
