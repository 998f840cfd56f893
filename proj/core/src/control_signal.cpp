#include "benjamin/control_signal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace benjamin {

ControlSignal::ControlSignal(std::vector<double> times, std::vector<SpectralField> values)
    : times_(std::move(times)), values_(std::move(values)) {
  if (times_.size() != values_.size()) throw std::invalid_argument("ControlSignal: times/values size mismatch");
  for (std::size_t i = 1; i < times_.size(); ++i) {
    if (!(times_[i] > times_[i - 1])) throw std::invalid_argument("ControlSignal: times must be increasing");
  }
}

SpectralField ControlSignal::at(double t) const {
  if (times_.empty()) throw std::logic_error("ControlSignal::at on an empty signal");
  if (t <= times_.front()) return values_.front();
  if (t >= times_.back()) return values_.back();
  const auto it = std::upper_bound(times_.begin(), times_.end(), t);
  const auto hi = static_cast<std::size_t>(it - times_.begin());
  const std::size_t lo = hi - 1;
  const double w = (t - times_[lo]) / (times_[hi] - times_[lo]);
  // Snap to nodes so stage times that land on the grid see the exact sample.
  if (w < 1e-9) return values_[lo];
  if (w > 1.0 - 1e-9) return values_[hi];
  SpectralField out = values_[lo];
  out *= 1.0 - w;
  out.axpy(w, values_[hi]);
  return out;
}

double ControlSignal::time_norm(double s) const {
  double total = 0.0;
  for (std::size_t i = 1; i < times_.size(); ++i) {
    const double a = sobolev_norm(values_[i - 1], s);
    const double b = sobolev_norm(values_[i], s);
    total += 0.5 * (times_[i] - times_[i - 1]) * (a * a + b * b);
  }
  return std::sqrt(total);
}

void ControlSignal::append(const ControlSignal& other, double offset) {
  for (std::size_t i = 0; i < other.size(); ++i) {
    const double t = other.times_[i] + offset;
    if (!times_.empty() && std::abs(t - times_.back()) <= 1e-12 * std::max(1.0, std::abs(t))) {
      values_.back() = other.values_[i];
      continue;
    }
    if (!times_.empty() && t < times_.back()) throw std::invalid_argument("ControlSignal::append: overlapping times");
    times_.push_back(t);
    values_.push_back(other.values_[i]);
  }
}

std::vector<double> uniform_times(double t0, double t1, int intervals) {
  if (intervals < 1) throw std::invalid_argument("uniform_times: need at least one interval");
  std::vector<double> t(static_cast<std::size_t>(intervals + 1));
  for (int i = 0; i <= intervals; ++i) t[static_cast<std::size_t>(i)] = t0 + (t1 - t0) * i / intervals;
  return t;
}

}  // namespace benjamin
