#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace gaborface {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// Grayscale raster, row-major. Pixel (i, j) (column i, row j) is centred on
/// the continuous coordinate (i, j); x grows rightward and y downward.
class ImageRaster {
 public:
  ImageRaster() = default;
  ImageRaster(int width, int height, std::vector<double> intensities);
  ImageRaster(int width, int height, double fill);

  int width() const { return width_; }
  int height() const { return height_; }
  std::span<const double> intensities() const { return pixels_; }

  double at(int column, int row) const {
    return pixels_[static_cast<std::size_t>(row) * width_ + column];
  }

  /// Pixel lookup with half-sample mirror reflection for indices outside the
  /// raster (-1 maps to 0, width maps to width - 1, periodic beyond that).
  double at_reflected(int column, int row) const {
    return at(reflect_index(column, width_), reflect_index(row, height_));
  }

  /// True when the continuous point lies in [0, width) x [0, height).
  bool contains(Point2 p) const;

  ImageRaster scaled(double factor) const;

  static int reflect_index(int index, int size);

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<double> pixels_;
};

/// Reads a binary 8-bit PGM ("P5", maxval <= 255). Intensities map to 0..255.
ImageRaster read_pgm(const std::filesystem::path& path);
ImageRaster parse_pgm(std::span<const unsigned char> bytes);

/// Encodes an 8-bit P5 PGM; intensities are rounded and clamped to 0..255.
std::string encode_pgm(const ImageRaster& image);

/// Bilinear resampling onto a width x height raster spanning the same extent.
ImageRaster resample_bilinear(const ImageRaster& image, int width, int height);

}  // namespace gaborface
