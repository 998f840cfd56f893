#include "benjamin/diagnostics.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "benjamin/errors.hpp"
#include "benjamin/spectral_ops.hpp"

namespace benjamin {

double invariant_I1(const SpectralField& u) { return 0.5 * inner(u, u); }

double invariant_I2(const SpectralField& u, const PhysicalParams& p) {
  const SpectralField ux = derivative(u, 1);
  const double kinetic = 0.5 * inner(ux, ux);
  const double dispersive = -0.5 * p.alpha * inner(u, hilbert_transform(ux));

  const int m = 2 * u.mode_count();
  const auto x = sample_on_grid(u, m);
  double cubic = 0.0;
  for (double v : x) cubic += v * v * v;
  cubic *= kTwoPi / m;

  return kinetic + dispersive + cubic / 3.0;
}

DecayFit fit_decay_rate(std::span<const double> times, std::span<const double> norms,
                        std::pair<double, double> window) {
  if (times.size() != norms.size()) throw std::invalid_argument("fit_decay_rate: size mismatch");
  double n = 0.0, st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double t = times[i];
    if (t < window.first || t > window.second) continue;
    if (!(norms[i] > 0.0)) throw NonPositiveNorm("fit_decay_rate: non-positive norm at t = " + std::to_string(t));
    const double y = std::log(norms[i]);
    n += 1.0;
    st += t;
    sy += y;
    stt += t * t;
    sty += t * y;
  }
  if (n < 2.0) throw std::invalid_argument("fit_decay_rate: fewer than two samples in the window");
  const double denom = n * stt - st * st;
  if (!(denom > 0.0)) throw std::invalid_argument("fit_decay_rate: degenerate time window");
  const double slope = (n * sty - st * sy) / denom;
  const double intercept = (sy - slope * st) / n;

  double ss_res = 0.0, ss_tot = 0.0;
  const double mean_y = sy / n;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double t = times[i];
    if (t < window.first || t > window.second) continue;
    const double y = std::log(norms[i]);
    const double r = y - (intercept + slope * t);
    ss_res += r * r;
    ss_tot += (y - mean_y) * (y - mean_y);
  }
  // A flat series is fitted exactly by a zero slope.
  const double tiny = 1e-30 * std::max(1.0, mean_y * mean_y);
  double r2 = ss_tot <= tiny ? 1.0 : 1.0 - ss_res / ss_tot;
  r2 = std::clamp(r2, 0.0, 1.0);
  return DecayFit{-slope, intercept, r2, window};
}

SpectralField random_field(int mode_count, std::uint64_t seed, double l2) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> phase(0.0, kTwoPi);
  SpectralField u(mode_count);
  for (int k = 1; k < mode_count / 2; ++k) {
    const double amplitude = 1.0 / (1.0 + static_cast<double>(k) * k);
    u.set_coeff(k, std::polar(amplitude, phase(rng)));
  }
  if (l2 > 0.0) u *= l2 / l2_norm(u);
  return u;
}

}  // namespace benjamin
