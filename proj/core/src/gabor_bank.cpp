#include "gaborface/gabor_bank.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "gaborface/errors.hpp"

namespace gaborface {

namespace {

// The Gaussian envelope at the window edge is exp(-24.5); the truncated
// discrete sum then leaks less than 1e-9 of k^2/sigma^2 per unit intensity.
constexpr double kSupportInSigmas = 7.0;

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw ValidationError(std::string(what) + " must be finite");
}

void hash_bytes(std::uint64_t& h, std::uint64_t word) {
  for (int i = 0; i < 8; ++i) {
    h ^= (word >> (8 * i)) & 0xffu;
    h *= 0x100000001b3ULL;
  }
}

}  // namespace

void FilterSpec::validate() const {
  require_finite(wavenumber, "wavenumber");
  require_finite(orientation, "orientation");
  require_finite(sigma, "sigma");
  if (wavenumber <= 0.0) throw ValidationError("wavenumber must be positive");
  if (orientation < 0.0 || orientation >= std::numbers::pi) {
    throw ValidationError("orientation must lie in [0, pi)");
  }
  if (sigma <= 0.0) throw ValidationError("sigma must be positive");
}

int FilterSpec::support_half_width() const {
  return static_cast<int>(std::ceil(kSupportInSigmas * sigma / wavenumber));
}

FilterBank FilterBank::build(std::span<const double> wavenumbers,
                             std::span<const double> orientations, double sigma) {
  if (wavenumbers.empty()) throw ValidationError("filter bank needs at least one wavenumber");
  if (orientations.empty()) throw ValidationError("filter bank needs at least one orientation");
  auto has_duplicates = [](std::span<const double> values) {
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    return std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end();
  };
  if (has_duplicates(wavenumbers)) throw ValidationError("duplicate wavenumber in filter bank");
  if (has_duplicates(orientations)) throw ValidationError("duplicate orientation in filter bank");

  FilterBank bank;
  bank.wavenumbers_.assign(wavenumbers.begin(), wavenumbers.end());
  bank.orientations_.assign(orientations.begin(), orientations.end());
  bank.sigma_ = sigma;
  bank.specs_.reserve(wavenumbers.size() * orientations.size());
  for (double k : wavenumbers) {
    for (double theta : orientations) {
      FilterSpec spec{k, theta, sigma};
      spec.validate();
      bank.specs_.push_back(spec);
    }
  }
  return bank;
}

FilterBank FilterBank::standard() {
  using std::numbers::pi;
  const double wavenumbers[] = {pi / 2, pi / 4, pi / 8};
  double orientations[6];
  for (int i = 0; i < 6; ++i) orientations[i] = i * pi / 6;
  return build(wavenumbers, orientations, pi);
}

std::string FilterBank::fingerprint() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  hash_bytes(h, wavenumbers_.size());
  for (double k : wavenumbers_) hash_bytes(h, std::bit_cast<std::uint64_t>(k));
  hash_bytes(h, orientations_.size());
  for (double t : orientations_) hash_bytes(h, std::bit_cast<std::uint64_t>(t));
  hash_bytes(h, std::bit_cast<std::uint64_t>(sigma_));
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

QuadraturePair evaluate_kernel(const FilterSpec& spec, Point2 center, Point2 point) {
  const double k = spec.wavenumber;
  const double s2 = spec.sigma * spec.sigma;
  const double dx = point.x - center.x;
  const double dy = point.y - center.y;
  const double envelope = (k * k / s2) * std::exp(-k * k * (dx * dx + dy * dy) / (2.0 * s2));
  const double phase = k * (std::cos(spec.orientation) * dx + std::sin(spec.orientation) * dy);
  return {envelope * (std::cos(phase) - std::exp(-s2 / 2.0)), envelope * std::sin(phase)};
}

QuadraturePair filter_response(const ImageRaster& image, const FilterSpec& spec, Point2 center) {
  if (!image.contains(center)) {
    throw OutOfBoundsError("filter centre (" + std::to_string(center.x) + ", " +
                           std::to_string(center.y) + ") lies outside the " +
                           std::to_string(image.width()) + "x" + std::to_string(image.height()) +
                           " image");
  }
  const double k = spec.wavenumber;
  const double s2 = spec.sigma * spec.sigma;
  const double gain = k * k / s2;
  const double decay = k * k / (2.0 * s2);
  const double dc = std::exp(-s2 / 2.0);
  const double kx = k * std::cos(spec.orientation);
  const double ky = k * std::sin(spec.orientation);
  const int half = spec.support_half_width();

  // The kernel separates: envelope(dx) * envelope(dy) times a phase that
  // splits by the angle-sum identities.
  struct Axis {
    int first = 0;
    std::vector<double> envelope, cosine, sine;
  };
  auto make_axis = [&](double c, double wave) {
    Axis axis;
    axis.first = static_cast<int>(std::ceil(c - half));
    const int last = static_cast<int>(std::floor(c + half));
    for (int p = axis.first; p <= last; ++p) {
      const double d = p - c;
      axis.envelope.push_back(std::exp(-decay * d * d));
      axis.cosine.push_back(std::cos(wave * d));
      axis.sine.push_back(std::sin(wave * d));
    }
    return axis;
  };
  const Axis ax = make_axis(center.x, kx);
  const Axis ay = make_axis(center.y, ky);

  const bool interior = ax.first >= 0 && ay.first >= 0 &&
                        ax.first + static_cast<int>(ax.envelope.size()) <= image.width() &&
                        ay.first + static_cast<int>(ay.envelope.size()) <= image.height();

  double even = 0.0;
  double odd = 0.0;
  for (std::size_t j = 0; j < ay.envelope.size(); ++j) {
    const int row = ay.first + static_cast<int>(j);
    const double ey = ay.envelope[j], cy = ay.cosine[j], sy = ay.sine[j];
    for (std::size_t i = 0; i < ax.envelope.size(); ++i) {
      const int col = ax.first + static_cast<int>(i);
      const double intensity = interior ? image.at(col, row) : image.at_reflected(col, row);
      const double w = ax.envelope[i] * ey * intensity;
      even += w * (ax.cosine[i] * cy - ax.sine[i] * sy - dc);
      odd += w * (ax.sine[i] * cy + ax.cosine[i] * sy);
    }
  }
  return {gain * even, gain * odd};
}

double amplitude(double even, double odd) { return std::hypot(even, odd); }

JetVector compute_jet(const ImageRaster& image, const FilterBank& bank, Point2 point) {
  JetVector jet;
  jet.amplitudes.reserve(bank.size());
  for (const FilterSpec& spec : bank.specs()) {
    jet.amplitudes.push_back(amplitude(filter_response(image, spec, point)));
  }
  return jet;
}

}  // namespace gaborface
