#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace gaborface::oracle {

namespace {

int mirror(int i, int n) {
  const int period = 2 * n;
  int m = ((i % period) + period) % period;
  return m < n ? m : period - 1 - m;
}

}  // namespace

Response filter_response(const ImageRaster& image, double k, double theta, double sigma, Point2 center,
                         double radius_sigmas) {
  const long double kk = k, s = sigma;
  const long double dc = std::exp(-s * s / 2);
  const int half = static_cast<int>(std::ceil(radius_sigmas * sigma / k));
  const int x0 = static_cast<int>(std::floor(center.x)) - half, x1 = static_cast<int>(std::ceil(center.x)) + half;
  const int y0 = static_cast<int>(std::floor(center.y)) - half, y1 = static_cast<int>(std::ceil(center.y)) + half;
  Response r;
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      const long double dx = x - static_cast<long double>(center.x);
      const long double dy = y - static_cast<long double>(center.y);
      const long double env = kk * kk / (s * s) * std::exp(-kk * kk * (dx * dx + dy * dy) / (2 * s * s));
      const long double phase = kk * (std::cos(static_cast<long double>(theta)) * dx +
                                      std::sin(static_cast<long double>(theta)) * dy);
      const long double v = image.at(mirror(x, image.width()), mirror(y, image.height()));
      r.even += env * (std::cos(phase) - dc) * v;
      r.odd += env * std::sin(phase) * v;
    }
  }
  return r;
}

std::vector<long double> midranks(std::span<const double> values) {
  std::vector<long double> out;
  for (double v : values) {
    long double smaller = 0, equal = 0;
    for (double w : values) {
      if (w < v) smaller += 1;
      if (w == v) equal += 1;
    }
    out.push_back(1 + smaller + (equal - 1) / 2);
  }
  return out;
}

long double pearson(std::span<const long double> x, std::span<const long double> y) {
  long double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= x.size();
  my /= y.size();
  long double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

std::vector<double> isotonic_exhaustive(std::span<const double> y) {
  const std::size_t n = y.size();
  long double best = std::numeric_limits<long double>::infinity();
  std::vector<double> best_fit;
  for (std::uint32_t cuts = 0; cuts < (1u << (n - 1)); ++cuts) {
    std::vector<double> fit(n);
    std::size_t start = 0;
    bool monotone = true;
    long double previous = -std::numeric_limits<long double>::infinity();
    long double sse = 0;
    for (std::size_t i = 0; i < n && monotone; ++i) {
      const bool boundary = i == n - 1 || (cuts >> i) & 1u;
      if (!boundary) continue;
      long double sum = 0;
      for (std::size_t j = start; j <= i; ++j) sum += y[j];
      const long double mean = sum / (i - start + 1);
      if (mean < previous) monotone = false;
      previous = mean;
      for (std::size_t j = start; j <= i; ++j) {
        fit[j] = static_cast<double>(mean);
        sse += (y[j] - mean) * (y[j] - mean);
      }
      start = i + 1;
    }
    if (monotone && sse < best) {
      best = sse;
      best_fit = fit;
    }
  }
  return best_fit;
}

double procrustes_grid_search(std::span<const Point2> source, std::span<const Point2> target, int steps,
                              bool with_reflection) {
  const std::size_t n = source.size();
  Point2 ms{}, mt{};
  for (std::size_t i = 0; i < n; ++i) {
    ms.x += source[i].x / n;
    ms.y += source[i].y / n;
    mt.x += target[i].x / n;
    mt.y += target[i].y / n;
  }
  double best = std::numeric_limits<double>::infinity();
  for (int flip = 0; flip <= (with_reflection ? 1 : 0); ++flip) {
    for (int s = 0; s < steps; ++s) {
      const double a = 2 * std::numbers::pi * s / steps;
      const double c = std::cos(a), sn = std::sin(a);
      double sse = 0;
      for (std::size_t i = 0; i < n; ++i) {
        const double x = source[i].x - ms.x;
        const double y = (flip ? -1.0 : 1.0) * (source[i].y - ms.y);
        const double rx = c * x - sn * y, ry = sn * x + c * y;
        const double ex = rx - (target[i].x - mt.x), ey = ry - (target[i].y - mt.y);
        sse += ex * ex + ey * ey;
      }
      best = std::min(best, std::sqrt(sse / n));
    }
  }
  return best;
}

ImageRaster textured_image(int width, int height, std::uint64_t seed, int blobs) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> px(0, width), py(0, height), size(2.0, 9.0), amp(-60.0, 60.0);
  struct Blob {
    double x, y, s, a;
  };
  std::vector<Blob> list;
  for (int i = 0; i < blobs; ++i) list.push_back({px(rng), py(rng), size(rng), amp(rng)});
  std::vector<double> pixels(static_cast<std::size_t>(width) * height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      double v = 128.0;
      for (const auto& b : list) {
        v += b.a * std::exp(-((x - b.x) * (x - b.x) + (y - b.y) * (y - b.y)) / (2 * b.s * b.s));
      }
      pixels[static_cast<std::size_t>(y) * width + x] = std::clamp(v, 0.0, 255.0);
    }
  }
  return ImageRaster(width, height, std::move(pixels));
}

ImageRaster grating(int width, int height, double k, double theta, double phase, double mean, double contrast,
                    double shift_x) {
  std::vector<double> pixels(static_cast<std::size_t>(width) * height);
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x)
      pixels[static_cast<std::size_t>(y) * width + x] =
          mean + contrast * std::cos(k * (std::cos(theta) * (x - shift_x) + std::sin(theta) * y) + phase);
  return ImageRaster(width, height, std::move(pixels));
}

}  // namespace gaborface::oracle
