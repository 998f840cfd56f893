#pragma once

#include <memory>
#include <vector>

#include "benjamin/spectral_field.hpp"

namespace benjamin {

/// Dispersion relation of the linear group: -k^3 - 2 mu k + alpha k |k|.
double phase_symbol(int k, const PhysicalParams& p);

/// phase_symbol(k) for k = 0..N/2, built once per (N, params).
class DispersionTable {
 public:
  DispersionTable(int mode_count, const PhysicalParams& p);

  /// Shared read-only table; repeated requests for the same (N, params) reuse it.
  static std::shared_ptr<const DispersionTable> get(int mode_count, const PhysicalParams& p);

  int mode_count() const { return mode_count_; }
  const PhysicalParams& params() const { return params_; }
  double phase(int k) const;  // any k in the band, uses oddness for k < 0
  const std::vector<double>& half() const { return phase_; }
  /// max |phi(k)| over 0 <= k < N/2.
  double max_abs_phase() const;

 private:
  int mode_count_;
  PhysicalParams params_;
  std::vector<double> phase_;
};

/// Fourier multiplier -i sgn(k).
SpectralField hilbert_transform(const SpectralField& u);

/// |k|^r on k != 0; the mean is left untouched.
SpectralField fractional_magnitude(const SpectralField& u, double r);

/// (ik)^order.
SpectralField derivative(const SpectralField& u, int order);

/// Linear group U_mu(t): multiplies mode k by exp(i phi(k) t).
SpectralField semigroup_apply(const SpectralField& u, double t, const PhysicalParams& p);

/// Dealiased d/dx(u^2) via 3/2 zero padding.
SpectralField nonlinear_term(const SpectralField& u);

SpectralField project_mean_zero(SpectralField u);

/// (R u)(x) = u(2c - x). R anticommutes with the odd-order terms, so
/// R u(-t) solves the equation whenever u does, with the forcing negated.
SpectralField reflect(const SpectralField& u, double c);

/// Zeroes the unpaired k = N/2 coefficient in place.
void zero_nyquist(SpectralField& u);

/// Values of the trigonometric polynomial u on an M-point grid, M >= N.
/// The Nyquist coefficient of u is dropped.
std::vector<double> sample_on_grid(const SpectralField& u, int grid_size);

}  // namespace benjamin
