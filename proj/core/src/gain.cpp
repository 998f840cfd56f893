#include "benjamin/gain.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace benjamin {

GainProfile::GainProfile(std::vector<double> samples, double lo, double hi)
    : samples_(std::move(samples)), lo_(lo), hi_(hi) {
  for (double v : samples_) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument("GainProfile: samples must be finite and >= 0");
  }
  const double total = integral();
  if (!(total > 0.0)) throw std::invalid_argument("GainProfile: gain has zero integral");
  for (double& v : samples_) v /= total;
}

GainProfile GainProfile::raised_cosine(int mode_count, double center, double width) {
  const double lo = center - 0.5 * width;
  const double hi = center + 0.5 * width;
  if (!(width > 0.0) || lo <= 0.0 || hi >= kTwoPi) {
    throw std::invalid_argument("GainProfile::raised_cosine: support must lie inside (0, 2pi)");
  }
  std::vector<double> g(static_cast<std::size_t>(mode_count), 0.0);
  for (int j = 0; j < mode_count; ++j) {
    const double x = kTwoPi * j / mode_count;
    if (x > lo && x < hi) {
      const double c = std::cos(kPi * (x - center) / width);
      g[static_cast<std::size_t>(j)] = c * c;
    }
  }
  return GainProfile(std::move(g), lo, hi);
}

GainProfile GainProfile::uniform(int mode_count) {
  return GainProfile(std::vector<double>(static_cast<std::size_t>(mode_count), 1.0), 0.0, kTwoPi);
}

GainProfile GainProfile::from_samples(std::vector<double> samples, double support_lo, double support_hi) {
  return GainProfile(std::move(samples), support_lo, support_hi);
}

double GainProfile::integral() const {
  const double sum = std::accumulate(samples_.begin(), samples_.end(), 0.0);
  return kTwoPi * sum / static_cast<double>(samples_.size());
}

}  // namespace benjamin
