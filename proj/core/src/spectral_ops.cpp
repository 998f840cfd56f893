#include "benjamin/spectral_ops.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

#include "fft.hpp"

namespace benjamin {

double phase_symbol(int k, const PhysicalParams& p) {
  const double kk = static_cast<double>(k);
  return -kk * kk * kk - 2.0 * p.mu * kk + p.alpha * kk * std::abs(kk);
}

DispersionTable::DispersionTable(int mode_count, const PhysicalParams& p)
    : mode_count_(mode_count), params_(p), phase_(static_cast<std::size_t>(mode_count / 2 + 1)) {
  for (int k = 0; k <= mode_count / 2; ++k) phase_[static_cast<std::size_t>(k)] = phase_symbol(k, p);
}

std::shared_ptr<const DispersionTable> DispersionTable::get(int mode_count, const PhysicalParams& p) {
  static std::mutex mutex;
  static std::map<std::tuple<int, double, double>, std::shared_ptr<const DispersionTable>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[{mode_count, p.alpha, p.mu}];
  if (!slot) slot = std::make_shared<const DispersionTable>(mode_count, p);
  return slot;
}

double DispersionTable::phase(int k) const {
  return k >= 0 ? phase_.at(static_cast<std::size_t>(k)) : -phase_.at(static_cast<std::size_t>(-k));
}

double DispersionTable::max_abs_phase() const {
  double m = 0.0;
  for (int k = 0; k < mode_count_ / 2; ++k) m = std::max(m, std::abs(phase_[static_cast<std::size_t>(k)]));
  return m;
}

SpectralField reflect(const SpectralField& u, double c) {
  SpectralField out(u.mode_count());
  const auto in = u.half_spectrum();
  auto o = out.half_spectrum();
  for (std::size_t k = 0; k < o.size(); ++k) {
    o[k] = std::conj(in[k]) * std::exp(Complex{0.0, -2.0 * c * static_cast<double>(k)});
  }
  return out;
}

void zero_nyquist(SpectralField& u) { u.half_spectrum().back() = 0.0; }

namespace {

// Applies a multiplier m(k), k >= 0, to the half spectrum; m(-k) = conj(m(k))
// is implied by the real-to-real operators below.
template <class Multiplier>
SpectralField apply_multiplier(const SpectralField& u, Multiplier m) {
  SpectralField out = u;
  auto c = out.half_spectrum();
  for (int k = 0; k < u.max_mode(); ++k) c[static_cast<std::size_t>(k)] *= m(k);
  zero_nyquist(out);
  return out;
}

}  // namespace

SpectralField hilbert_transform(const SpectralField& u) {
  return apply_multiplier(u, [](int k) { return k == 0 ? Complex{} : Complex{0.0, -1.0}; });
}

SpectralField fractional_magnitude(const SpectralField& u, double r) {
  return apply_multiplier(u, [r](int k) {
    return k == 0 ? Complex{1.0} : Complex{std::pow(static_cast<double>(k), r)};
  });
}

SpectralField derivative(const SpectralField& u, int order) {
  if (order < 1) throw std::invalid_argument("derivative: order must be positive");
  return apply_multiplier(u, [order](int k) { return std::pow(Complex{0.0, static_cast<double>(k)}, order); });
}

SpectralField semigroup_apply(const SpectralField& u, double t, const PhysicalParams& p) {
  const auto table = DispersionTable::get(u.mode_count(), p);
  return apply_multiplier(u, [&](int k) {
    const double theta = table->half()[static_cast<std::size_t>(k)] * t;
    return Complex{std::cos(theta), std::sin(theta)};
  });
}

std::vector<double> sample_on_grid(const SpectralField& u, int grid_size) {
  if (grid_size < u.mode_count() || grid_size % 2 != 0) {
    throw std::invalid_argument("sample_on_grid: grid must be even and at least N");
  }
  std::vector<Complex> padded(static_cast<std::size_t>(grid_size / 2 + 1));
  const auto c = u.half_spectrum();
  for (int k = 0; k < u.max_mode(); ++k) padded[static_cast<std::size_t>(k)] = c[static_cast<std::size_t>(k)];
  std::vector<double> x(static_cast<std::size_t>(grid_size));
  fft::real_inverse(padded, x);
  return x;
}

SpectralField nonlinear_term(const SpectralField& u) {
  const int n = u.mode_count();
  // 3/2 padding keeps every alias of the quadratic product outside |k| < N/2.
  int m = 3 * n / 2;
  if (m % 2 != 0) ++m;
  auto x = sample_on_grid(u, m);
  for (auto& v : x) v *= v;
  std::vector<Complex> sq(static_cast<std::size_t>(m / 2 + 1));
  fft::real_forward(x, sq);

  SpectralField out(n);
  auto c = out.half_spectrum();
  for (int k = 1; k < n / 2; ++k) {
    c[static_cast<std::size_t>(k)] = Complex{0.0, static_cast<double>(k)} * sq[static_cast<std::size_t>(k)];
  }
  return out;
}

SpectralField project_mean_zero(SpectralField u) {
  u.half_spectrum()[0] = 0.0;
  return u;
}

}  // namespace benjamin
