#pragma once

#include <complex>
#include <vector>

namespace benjamin {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Composite Simpson rule on [a, b]; intervals is rounded up to an even count.
QuadratureRule composite_simpson(double a, double b, int intervals);

/// order-point Gauss-Legendre rule on each of `panels` equal subintervals of [a, b].
QuadratureRule composite_gauss_legendre(double a, double b, int panels, int order);

/// Integral of exp(-z tau) over [0, a], evaluated without cancellation for small |z a|.
std::complex<double> exp_integral(std::complex<double> z, double a);

}  // namespace benjamin
