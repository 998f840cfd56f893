#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "benjamin/spectral_field.hpp"

namespace testing {

using benjamin::Complex;
using benjamin::SpectralField;

/// max_k |a_k - b_k| over the stored half spectrum.
inline double max_diff(const SpectralField& a, const SpectralField& b) {
  double d = 0.0;
  const auto x = a.half_spectrum();
  const auto y = b.half_spectrum();
  for (std::size_t k = 0; k < x.size(); ++k) d = std::max(d, std::abs(x[k] - y[k]));
  return d;
}

inline double max_abs(const SpectralField& a) { return max_diff(a, SpectralField(a.mode_count())); }

/// Random real band-limited field with modes 1..kmax, independent of the library generator.
inline SpectralField band_limited(int n, int kmax, unsigned seed, double scale = 1.0) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> g;
  SpectralField u(n);
  for (int k = 1; k <= kmax; ++k) u.set_coeff(k, scale * Complex{g(rng), g(rng)} / (1.0 + k * k));
  return u;
}

/// Direct trapezoid quadrature of f on M points of [0, 2 pi).
template <class F>
double quad(F&& f, int m = 4096) {
  double s = 0.0;
  for (int j = 0; j < m; ++j) s += f(2.0 * M_PI * j / m);
  return s * 2.0 * M_PI / m;
}

/// Pointwise value of the trigonometric polynomial at x.
inline double eval(const SpectralField& u, double x) {
  double v = u.coeff(0).real();
  for (int k = 1; k < u.max_mode(); ++k) v += 2.0 * std::real(u.coeff(k) * std::exp(Complex{0.0, k * x}));
  return v;
}

}  // namespace testing
