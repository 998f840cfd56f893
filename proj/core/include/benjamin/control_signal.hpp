#pragma once

#include <vector>

#include "benjamin/spectral_field.hpp"

namespace benjamin {

/// Open-loop control h(., t) sampled on an increasing time grid. Between
/// samples the signal is interpolated linearly; outside the grid it is held
/// at the end values.
class ControlSignal {
 public:
  ControlSignal() = default;
  ControlSignal(std::vector<double> times, std::vector<SpectralField> values);

  bool empty() const { return times_.empty(); }
  std::size_t size() const { return times_.size(); }
  const std::vector<double>& times() const { return times_; }
  const std::vector<SpectralField>& values() const { return values_; }

  SpectralField at(double t) const;

  /// (integral over the grid of |h(t)|^2_{H^s} dt)^{1/2}, trapezoidal.
  double time_norm(double s = 0.0) const;

  /// Appends another signal shifted by `offset` in time. A leading sample
  /// that coincides with the current last time replaces it.
  void append(const ControlSignal& other, double offset);

 private:
  std::vector<double> times_;
  std::vector<SpectralField> values_;
};

/// intervals+1 equally spaced points from t0 to t1 inclusive.
std::vector<double> uniform_times(double t0, double t1, int intervals);

}  // namespace benjamin
