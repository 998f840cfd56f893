#include "benjamin/bourgain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>
#include <random>
#include <stdexcept>

#include "benjamin/errors.hpp"
#include "benjamin/spectral_ops.hpp"
#include "fft.hpp"

namespace benjamin {

namespace {

double bracket(double x) { return std::sqrt(1.0 + x * x); }

// Smallest even 2^a 3^b 5^c >= n, so the time transforms stay fast.
int smooth_size(int n) {
  for (int m = std::max(n, 2);; ++m) {
    if (m % 2 != 0) continue;
    int r = m;
    for (int f : {2, 3, 5}) {
      while (r % f == 0) r /= f;
    }
    if (r == 1) return m;
  }
}

// <tau_m - phi(k)>^exponent for k in (-N/2, N/2), row-major in k. The table
// depends only on the grid, so ensembles reuse the last one built.
const std::vector<double>& modulation_weights(const SpaceTimeField& v, const PhysicalParams& p, double exponent) {
  using Key = std::tuple<int, int, double, double, double, double>;
  thread_local Key key{-1, -1, 0.0, 0.0, 0.0, 0.0};
  thread_local std::vector<double> table;
  const Key want{v.mode_count(), v.time_samples(), v.dt(), p.alpha, p.mu, exponent};
  if (want == key) return table;
  const auto phases = DispersionTable::get(v.mode_count(), p);
  const int J = v.time_samples();
  const int kmax = v.mode_count() / 2 - 1;
  table.assign(static_cast<std::size_t>(2 * kmax + 1) * static_cast<std::size_t>(J), 1.0);
  if (exponent != 0.0) {
    for (int k = -kmax; k <= kmax; ++k) {
      const double phi = phases->phase(k);
      double* row = table.data() + static_cast<std::size_t>(k + kmax) * J;
      for (int m = 0; m < J; ++m) {
        const double d = v.tau(m) - phi;
        row[m] = std::exp(0.5 * exponent * std::log1p(d * d));
      }
    }
  }
  key = want;
  return table;
}

}  // namespace

SpaceTimeField SpaceTimeField::from_samples(std::vector<SpectralField> samples, double dt) {
  if (samples.size() < 2) throw std::invalid_argument("SpaceTimeField: need at least two samples");
  if (!(dt > 0.0)) throw std::invalid_argument("SpaceTimeField: dt must be positive");
  SpaceTimeField v;
  v.mode_count_ = samples.front().mode_count();
  v.samples_ = static_cast<int>(samples.size());
  v.dt_ = dt;
  const int J = v.samples_;
  const int half = v.mode_count_ / 2;

  for (int j = 0; j < J; ++j) {
    const double s = std::sin(kPi * j / J);
    SpectralField& w = samples[static_cast<std::size_t>(j)];
    if (w.mode_count() != v.mode_count_) throw std::invalid_argument("SpaceTimeField: mixed mode counts");
    w *= s * s;
    zero_nyquist(w);
  }
  v.windowed_ = std::move(samples);

  v.hat_.assign(static_cast<std::size_t>(half) * static_cast<std::size_t>(J), Complex{});
  std::vector<Complex> series(static_cast<std::size_t>(J)), spectrum(static_cast<std::size_t>(J));
  for (int k = 0; k < half; ++k) {
    for (int j = 0; j < J; ++j) series[static_cast<std::size_t>(j)] = v.windowed_[static_cast<std::size_t>(j)].coeff(k);
    fft::complex_forward(series, spectrum);
    for (int m = 0; m < J; ++m) {
      v.hat_[static_cast<std::size_t>(k) * J + m] = dt * spectrum[static_cast<std::size_t>(m)];
    }
  }
  return v;
}

double SpaceTimeField::dtau() const { return kTwoPi / (samples_ * dt_); }

double SpaceTimeField::tau(int m) const {
  const int signed_m = m < (samples_ + 1) / 2 ? m : m - samples_;
  return signed_m * dtau();
}

Complex SpaceTimeField::hat(int k, int m) const {
  const int J = samples_;
  if (k >= 0) {
    if (k >= mode_count_ / 2) return {};
    return hat_[static_cast<std::size_t>(k) * J + m];
  }
  if (-k >= mode_count_ / 2) return {};
  const int mirrored = (J - m) % J;
  return std::conj(hat_[static_cast<std::size_t>(-k) * J + mirrored]);
}

double xsb_norm(const SpaceTimeField& v, double s, double b, const PhysicalParams& p) {
  const auto& w = modulation_weights(v, p, 2.0 * b);
  const int J = v.time_samples();
  const int kmax = v.mode_count() / 2 - 1;
  double total = 0.0;
  for (int k = -kmax; k <= kmax; ++k) {
    const double* row = w.data() + static_cast<std::size_t>(k + kmax) * J;
    double sum = 0.0;
    for (int m = 0; m < J; ++m) sum += row[m] * std::norm(v.hat(k, m));
    total += std::pow(bracket(k), 2.0 * s) * sum;
  }
  return std::sqrt(total * v.dtau());
}

double ysb_norm(const SpaceTimeField& v, double s, double b, const PhysicalParams& p) {
  const auto& w = modulation_weights(v, p, b);
  const int J = v.time_samples();
  const int kmax = v.mode_count() / 2 - 1;
  double total = 0.0;
  for (int k = -kmax; k <= kmax; ++k) {
    const double* row = w.data() + static_cast<std::size_t>(k + kmax) * J;
    double sum = 0.0;
    for (int m = 0; m < J; ++m) sum += row[m] * std::abs(v.hat(k, m));
    sum *= std::pow(bracket(k), s) * v.dtau();
    total += sum * sum;
  }
  return std::sqrt(total);
}

double zsb_norm(const SpaceTimeField& v, double s, double b, const PhysicalParams& p) {
  return xsb_norm(v, s, b, p) + ysb_norm(v, s, b - 0.5, p);
}

double l4_norm(const SpaceTimeField& v) {
  const int m = 2 * v.mode_count();
  double total = 0.0;
  for (const auto& u : v.windowed()) {
    double slice = 0.0;
    for (double x : sample_on_grid(u, m)) slice += x * x * x * x;
    total += slice;
  }
  total *= (kTwoPi / m) * v.dt();
  return std::pow(total, 0.25);
}

double l4_embedding_ratio(const SpaceTimeField& v, const PhysicalParams& p) {
  const double x = xsb_norm(v, 0.0, 1.0 / 3.0, p);
  if (!(x > 0.0)) throw DivisionByZeroNorm("l4_embedding_ratio: X_{0,1/3} norm vanishes");
  return l4_norm(v) / x;
}

SpaceTimeField random_free_wave(int mode_count, std::uint64_t seed, const PhysicalParams& p, double window) {
  if (!(window > 0.0)) throw std::invalid_argument("random_free_wave: window must be positive");
  const auto table = DispersionTable::get(mode_count, p);
  const double fastest = std::max(table->max_abs_phase(), 1.0);
  const double dt = kPi / (2.0 * fastest);
  const int J = smooth_size(static_cast<int>(std::ceil(window / dt)));

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  std::vector<Complex> c(static_cast<std::size_t>(mode_count / 2), Complex{});
  for (int k = 1; k < mode_count / 2; ++k) {
    c[static_cast<std::size_t>(k)] = std::polar(1.0 / (1.0 + static_cast<double>(k) * k), angle(rng));
  }

  // Phases advance by a fixed rotation per step, resynchronized every 256 steps.
  std::vector<Complex> rot(c.size()), cur(c.size());
  for (int k = 1; k < mode_count / 2; ++k) rot[static_cast<std::size_t>(k)] = std::polar(1.0, table->phase(k) * dt);
  std::vector<SpectralField> samples;
  samples.reserve(static_cast<std::size_t>(J));
  for (int j = 0; j < J; ++j) {
    SpectralField u(mode_count);
    auto h = u.half_spectrum();
    for (int k = 1; k < mode_count / 2; ++k) {
      const auto kk = static_cast<std::size_t>(k);
      cur[kk] = j % 256 == 0 ? std::polar(1.0, std::fmod(table->phase(k) * j * dt, kTwoPi)) : cur[kk] * rot[kk];
      h[kk] = c[kk] * cur[kk];
    }
    samples.push_back(std::move(u));
  }
  return SpaceTimeField::from_samples(std::move(samples), dt);
}

double resonance_E(long k, long k1, double alpha) {
  const long k2 = k - k1;
  if (k == 0 || k1 == 0 || k2 == 0) throw DegenerateFrequencies("resonance_E: k, k1 and k-k1 must be nonzero");
  // The cubic part is an exact integer for |k| up to ~2e6.
  const long cubic = 3 * k * k1 * k2;
  const long quad = -k * std::labs(k) + k1 * std::labs(k1) + k2 * std::labs(k2);
  return alpha * static_cast<double>(quad) + static_cast<double>(cubic);
}

NonresonanceReport verify_nonresonance(long k_max, double alpha, double c_alpha, int tau_samples,
                                       std::uint64_t seed) {
  if (k_max < 2) throw std::invalid_argument("verify_nonresonance: k_max must be >= 2");
  NonresonanceReport r;
  r.k_max = k_max;
  r.alpha = alpha;
  r.c_alpha = c_alpha;
  r.resonance_min_ratio = std::numeric_limits<double>::infinity();
  PhysicalParams p;
  p.alpha = alpha;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const double threshold = std::max(1.0, 4.0 * alpha / 3.0);

  auto note = [&](long k, long k1) {
    if (r.examples.size() < 20) r.examples.emplace_back(k, k1);
  };

  for (long k = -k_max; k <= k_max; ++k) {
    for (long k1 = -k_max; k1 <= k_max; ++k1) {
      const long k2 = k - k1;
      if (k == 0 || k1 == 0 || k2 == 0) continue;
      ++r.pairs_checked;
      const long triple = std::labs(k * k1 * k2);
      // 2|3 k k1 k2| >= 3 k^2 and 2|k1 k2| >= |k|, in integers.
      if (2 * 3 * triple < 3 * k * k) {
        ++r.cubic_bound_violations;
        note(k, k1);
      }
      if (2 * std::labs(k1 * k2) < std::labs(k)) {
        ++r.product_bound_violations;
        note(k, k1);
      }
      const double top = static_cast<double>(std::max({std::labs(k), std::labs(k1), std::labs(k2)}));
      if (top < threshold) continue;
      const double e = resonance_E(k, k1, alpha);
      ++r.resonance_checked;
      r.resonance_min_ratio = std::min(r.resonance_min_ratio, std::abs(e) / (3.0 * triple));
      if (std::abs(e) < 3.0 * c_alpha * static_cast<double>(triple)) {
        ++r.resonance_violations;
        note(k, k1);
      }
      const double bound = 0.375 * c_alpha * static_cast<double>(k * k);
      const double phi = phase_symbol(static_cast<int>(k), p);
      const double phi1 = phase_symbol(static_cast<int>(k1), p);
      const double phi2 = phase_symbol(static_cast<int>(k2), p);
      for (int i = 0; i < tau_samples; ++i) {
        // Modulations of the size of E are where the cases compete.
        const double tau = phi + unit(rng) * std::abs(e);
        const double tau1 = phi1 + unit(rng) * std::abs(e);
        ++r.trichotomy_checked;
        const bool any = std::abs(tau - phi) > bound || std::abs(tau1 - phi1) > bound ||
                         std::abs(tau - tau1 - phi2) > bound;
        if (!any) {
          ++r.trichotomy_violations;
          note(k, k1);
        }
      }
    }
  }
  if (r.resonance_checked == 0) r.resonance_min_ratio = 0.0;
  return r;
}

}  // namespace benjamin
