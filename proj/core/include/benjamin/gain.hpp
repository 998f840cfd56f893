#pragma once

#include <span>
#include <vector>

#include "benjamin/spectral_field.hpp"

namespace benjamin {

/// Localized control gain g(x) >= 0 on the N-point grid, normalized so that
/// the trapezoidal integral over [0, 2pi) is exactly 1.
class GainProfile {
 public:
  /// g(x) = c cos^2(pi (x - center) / width) on (center - width/2, center + width/2).
  static GainProfile raised_cosine(int mode_count, double center = kPi, double width = 2.0);
  /// Degenerate gain 1/(2pi) on the whole torus.
  static GainProfile uniform(int mode_count);
  /// Arbitrary non-negative samples; rescaled to unit integral.
  static GainProfile from_samples(std::vector<double> samples, double support_lo, double support_hi);

  int mode_count() const { return static_cast<int>(samples_.size()); }
  std::span<const double> samples() const { return samples_; }
  double support_lo() const { return lo_; }
  double support_hi() const { return hi_; }
  /// Trapezoidal integral, equal to 1 up to rounding.
  double integral() const;

 private:
  GainProfile(std::vector<double> samples, double lo, double hi);

  std::vector<double> samples_;
  double lo_ = 0.0;
  double hi_ = kTwoPi;
};

}  // namespace benjamin
