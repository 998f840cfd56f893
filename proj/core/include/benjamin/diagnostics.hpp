#pragma once

#include <cstdint>
#include <span>
#include <utility>

#include "benjamin/spectral_field.hpp"

namespace benjamin {

/// Mass, (1/2) integral of u^2, by Parseval.
double invariant_I1(const SpectralField& u);

/// Energy, integral of (1/2) u_x^2 - (alpha/2) u H u_x + (1/3) u^3.
///
/// The cubic sign is the one conserved by u_t - alpha H u_xx - u_xxx + (u^2)_x = 0.
/// The cubic integral is evaluated exactly on a 2N-point grid.
double invariant_I2(const SpectralField& u, const PhysicalParams& p);

struct DiagnosticsRecord {
  double t = 0.0;
  double l2 = 0.0;
  double hs = 0.0;
  double I1 = 0.0;
  double I2 = 0.0;
  /// Power drawn by the feedback, <K u, u>, or |h(t)|^2 for an open-loop control.
  double control_energy = 0.0;
};

struct DecayFit {
  double rate = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::pair<double, double> window{0.0, 0.0};
};

/// Least-squares line through (t, log norm) restricted to the window.
/// rate is the negated slope. Throws NonPositiveNorm for norms <= 0 in the window.
DecayFit fit_decay_rate(std::span<const double> times, std::span<const double> norms,
                        std::pair<double, double> window);

/// Seeded random real field: |u_k| proportional to <k>^{-2}, uniformly random
/// phases, zero mean, zero Nyquist. If l2 > 0 the field is rescaled to that norm.
SpectralField random_field(int mode_count, std::uint64_t seed, double l2 = 0.0);

}  // namespace benjamin
