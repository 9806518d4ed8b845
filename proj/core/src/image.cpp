#include "gaborface/image.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>

#include "gaborface/errors.hpp"

namespace gaborface {

ImageRaster::ImageRaster(int width, int height, std::vector<double> intensities)
    : width_(width), height_(height), pixels_(std::move(intensities)) {
  if (width < 1 || height < 1) {
    throw ValidationError("image dimensions must be at least 1x1, got " + std::to_string(width) +
                          "x" + std::to_string(height));
  }
  if (pixels_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw ValidationError("image buffer holds " + std::to_string(pixels_.size()) +
                          " values, expected " + std::to_string(width * height));
  }
  if (!std::all_of(pixels_.begin(), pixels_.end(), [](double v) { return std::isfinite(v); })) {
    throw ValidationError("image contains non-finite intensities");
  }
}

ImageRaster::ImageRaster(int width, int height, double fill)
    : ImageRaster(width, height,
                  std::vector<double>(static_cast<std::size_t>(std::max(width, 0)) *
                                          static_cast<std::size_t>(std::max(height, 0)),
                                      fill)) {}

bool ImageRaster::contains(Point2 p) const {
  return std::isfinite(p.x) && std::isfinite(p.y) && p.x >= 0.0 && p.y >= 0.0 && p.x < width_ &&
         p.y < height_;
}

ImageRaster ImageRaster::scaled(double factor) const {
  std::vector<double> out(pixels_.size());
  std::transform(pixels_.begin(), pixels_.end(), out.begin(),
                 [factor](double v) { return v * factor; });
  return ImageRaster(width_, height_, std::move(out));
}

int ImageRaster::reflect_index(int index, int size) {
  if (index >= 0 && index < size) return index;
  const int period = 2 * size;
  int m = index % period;
  if (m < 0) m += period;
  return m < size ? m : period - 1 - m;
}

namespace {

class PgmReader {
 public:
  explicit PgmReader(std::span<const unsigned char> bytes) : bytes_(bytes) {}

  std::string token() {
    skip_space_and_comments();
    std::string out;
    while (pos_ < bytes_.size() && !std::isspace(bytes_[pos_])) out.push_back(char(bytes_[pos_++]));
    if (out.empty()) throw FormatError("PGM header truncated");
    return out;
  }

  int integer(const char* field) {
    const std::string t = token();
    if (!std::all_of(t.begin(), t.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
      throw FormatError(std::string("PGM header field '") + field + "' is not an integer: " + t);
    }
    return std::stoi(t);
  }

  // Exactly one whitespace byte separates maxval from the raster.
  void single_separator() {
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) {
      throw FormatError("PGM header not terminated by whitespace");
    }
    ++pos_;
  }

  std::span<const unsigned char> rest() const { return bytes_.subspan(pos_); }

 private:
  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::span<const unsigned char> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

ImageRaster parse_pgm(std::span<const unsigned char> bytes) {
  PgmReader reader(bytes);
  if (reader.token() != "P5") throw FormatError("not a binary PGM (magic P5 expected)");
  const int width = reader.integer("width");
  const int height = reader.integer("height");
  const int maxval = reader.integer("maxval");
  if (width < 1 || height < 1) throw FormatError("PGM dimensions must be positive");
  if (maxval < 1 || maxval > 255) {
    throw FormatError("only 8-bit PGM is supported (maxval " + std::to_string(maxval) + ")");
  }
  reader.single_separator();
  const auto raster = reader.rest();
  const std::size_t count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  if (raster.size() < count) {
    throw FormatError("PGM raster truncated: " + std::to_string(raster.size()) + " of " +
                      std::to_string(count) + " bytes");
  }
  const double scale = maxval == 255 ? 1.0 : 255.0 / maxval;
  std::vector<double> pixels(count);
  for (std::size_t i = 0; i < count; ++i) pixels[i] = raster[i] * scale;
  return ImageRaster(width, height, std::move(pixels));
}

ImageRaster read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open image " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  try {
    return parse_pgm(bytes);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

std::string encode_pgm(const ImageRaster& image) {
  std::string out = "P5\n" + std::to_string(image.width()) + " " +
                    std::to_string(image.height()) + "\n255\n";
  out.reserve(out.size() + image.intensities().size());
  for (double v : image.intensities()) {
    out.push_back(static_cast<char>(static_cast<unsigned char>(std::clamp(std::lround(v), 0L, 255L))));
  }
  return out;
}

ImageRaster resample_bilinear(const ImageRaster& image, int width, int height) {
  if (width < 1 || height < 1) throw ValidationError("resample target must be at least 1x1");
  if (width == image.width() && height == image.height()) return image;
  const double sx = static_cast<double>(image.width()) / width;
  const double sy = static_cast<double>(image.height()) / height;
  std::vector<double> out(static_cast<std::size_t>(width) * height);
  for (int row = 0; row < height; ++row) {
    const double y = std::min(row * sy, image.height() - 1.0);
    const int y0 = static_cast<int>(std::floor(y));
    const int y1 = std::min(y0 + 1, image.height() - 1);
    const double fy = y - y0;
    for (int col = 0; col < width; ++col) {
      const double x = std::min(col * sx, image.width() - 1.0);
      const int x0 = static_cast<int>(std::floor(x));
      const int x1 = std::min(x0 + 1, image.width() - 1);
      const double fx = x - x0;
      const double top = image.at(x0, y0) * (1 - fx) + image.at(x1, y0) * fx;
      const double bottom = image.at(x0, y1) * (1 - fx) + image.at(x1, y1) * fx;
      out[static_cast<std::size_t>(row) * width + col] = top * (1 - fy) + bottom * fy;
    }
  }
  return ImageRaster(width, height, std::move(out));
}

}  // namespace gaborface
