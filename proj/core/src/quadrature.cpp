#include "benjamin/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace benjamin {

QuadratureRule composite_simpson(double a, double b, int intervals) {
  if (intervals < 2) throw std::invalid_argument("composite_simpson: need at least 2 intervals");
  if (intervals % 2 != 0) ++intervals;
  QuadratureRule rule;
  const double h = (b - a) / intervals;
  rule.nodes.resize(static_cast<std::size_t>(intervals + 1));
  rule.weights.resize(static_cast<std::size_t>(intervals + 1));
  for (int i = 0; i <= intervals; ++i) {
    rule.nodes[static_cast<std::size_t>(i)] = a + i * h;
    double w = (i == 0 || i == intervals) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    rule.weights[static_cast<std::size_t>(i)] = w * h / 3.0;
  }
  return rule;
}

namespace {

// Nodes/weights on [-1, 1] by Newton iteration on P_n.
void gauss_legendre_reference(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(static_cast<std::size_t>(n), 0.0);
  w.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    // Refresh the derivative at the converged root.
    double p0 = 1.0, p1 = 0.0;
    for (int j = 1; j <= n; ++j) {
      const double p2 = p1;
      p1 = p0;
      p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
    }
    dp = n * (z * p0 - p1) / (z * z - 1.0);
    const double weight = 2.0 / ((1.0 - z * z) * dp * dp);
    x[static_cast<std::size_t>(i)] = -z;
    x[static_cast<std::size_t>(n - 1 - i)] = z;
    w[static_cast<std::size_t>(i)] = weight;
    w[static_cast<std::size_t>(n - 1 - i)] = weight;
  }
}

}  // namespace

QuadratureRule composite_gauss_legendre(double a, double b, int panels, int order) {
  if (panels < 1 || order < 1) throw std::invalid_argument("composite_gauss_legendre: bad sizes");
  std::vector<double> x, w;
  gauss_legendre_reference(order, x, w);
  QuadratureRule rule;
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * h;
    for (int i = 0; i < order; ++i) {
      rule.nodes.push_back(mid + 0.5 * h * x[static_cast<std::size_t>(i)]);
      rule.weights.push_back(0.5 * h * w[static_cast<std::size_t>(i)]);
    }
  }
  return rule;
}

std::complex<double> exp_integral(std::complex<double> z, double a) {
  const std::complex<double> za = z * a;
  if (std::abs(za) < 1e-3) {
    // a * (1 - za/2 + za^2/6 - za^3/24 + za^4/120)
    return a * (1.0 + za * (-0.5 + za * (1.0 / 6.0 + za * (-1.0 / 24.0 + za / 120.0))));
  }
  return (1.0 - std::exp(-za)) / z;
}

}  // namespace benjamin
