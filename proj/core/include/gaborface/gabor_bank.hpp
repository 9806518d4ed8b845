#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gaborface/image.hpp"

namespace gaborface {

/// One Gabor filter: wave-vector magnitude (inverse pixels), wave-vector angle
/// in [0, pi), and the dimensionless envelope width.
struct FilterSpec {
  double wavenumber = 0.0;
  double orientation = 0.0;
  double sigma = 0.0;

  /// Throws ValidationError when any invariant fails.
  void validate() const;

  /// Half-width, in pixels, of the square support window: ceil(7 sigma / k).
  int support_half_width() const;

  friend bool operator==(const FilterSpec&, const FilterSpec&) = default;
};

/// Even (cosine, DC-corrected) and odd (sine) filter values or responses.
struct QuadraturePair {
  double even = 0.0;
  double odd = 0.0;
};

/// Frequency-major, orientation-minor bank of filters sharing one sigma.
class FilterBank {
 public:
  static FilterBank build(std::span<const double> wavenumbers,
                          std::span<const double> orientations, double sigma);

  /// Three octave-spaced wavenumbers {pi/2, pi/4, pi/8}, six orientations at
  /// pi/6 spacing in [0, pi), sigma = pi: 18 filters.
  static FilterBank standard();

  std::span<const FilterSpec> specs() const { return specs_; }
  std::size_t size() const { return specs_.size(); }
  int frequency_count() const { return static_cast<int>(wavenumbers_.size()); }
  int orientation_count() const { return static_cast<int>(orientations_.size()); }
  const std::vector<double>& wavenumbers() const { return wavenumbers_; }
  const std::vector<double>& orientations() const { return orientations_; }
  double sigma() const { return sigma_; }

  /// FNV-1a hash of the exact parameter bits, as 16 hex digits.
  std::string fingerprint() const;

  friend bool operator==(const FilterBank& a, const FilterBank& b) {
    return a.specs_ == b.specs_;
  }

 private:
  FilterBank() = default;

  std::vector<double> wavenumbers_;
  std::vector<double> orientations_;
  double sigma_ = 0.0;
  std::vector<FilterSpec> specs_;
};

/// Amplitudes of the combined even/odd responses, one per bank filter, in bank order.
struct JetVector {
  std::vector<double> amplitudes;

  std::size_t size() const { return amplitudes.size(); }
  friend bool operator==(const JetVector&, const JetVector&) = default;
};

/// Closed-form kernel values at `point` for a filter centred on `center`.
QuadraturePair evaluate_kernel(const FilterSpec& spec, Point2 center, Point2 point);

/// Discrete response: sum over the support window (mirror-reflected at image
/// edges) of kernel value times intensity, accumulated in row-major order.
/// Throws OutOfBoundsError when `center` is outside the image.
QuadraturePair filter_response(const ImageRaster& image, const FilterSpec& spec, Point2 center);

double amplitude(double even, double odd);
inline double amplitude(QuadraturePair r) { return amplitude(r.even, r.odd); }

JetVector compute_jet(const ImageRaster& image, const FilterBank& bank, Point2 point);

}  // namespace gaborface
