#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "benjamin/spectral_field.hpp"

namespace benjamin {

/// Space-time Fourier data v_hat(k, tau_m) of a Hann-windowed sequence of
/// fields sampled at t_j = j dt, j = 0..J-1:
///   v_hat(k, tau_m) = dt sum_j w_j v_k(t_j) exp(-i tau_m t_j),
///   w_j = sin^2(pi j / J),  tau_m = 2 pi m / (J dt)  (FFT ordering).
/// Only k >= 0 is stored; v_hat(-k, -tau) = conj(v_hat(k, tau)).
class SpaceTimeField {
 public:
  static SpaceTimeField from_samples(std::vector<SpectralField> samples, double dt);

  int mode_count() const { return mode_count_; }
  int time_samples() const { return samples_; }
  double dt() const { return dt_; }
  double dtau() const;
  /// Signed frequency of FFT index m.
  double tau(int m) const;
  /// k in (-N/2, N/2), m in [0, J).
  Complex hat(int k, int m) const;
  /// Windowed samples, used for physical-space norms.
  const std::vector<SpectralField>& windowed() const { return windowed_; }

 private:
  int mode_count_ = 0;
  int samples_ = 0;
  double dt_ = 0.0;
  std::vector<Complex> hat_;  // k-major: hat_[k * J + m], k = 0..N/2-1
  std::vector<SpectralField> windowed_;
};

/// (sum_k sum_m <k>^{2s} <tau_m - phi(k)>^{2b} |v_hat|^2 dtau)^{1/2}.
/// With b = 0 this equals (sum_j dt |w_j v(t_j)|_{H^s}^2)^{1/2}.
double xsb_norm(const SpaceTimeField& v, double s, double b, const PhysicalParams& p);
/// (sum_k (sum_m <k>^s <tau_m - phi(k)>^b |v_hat| dtau)^2)^{1/2}.
double ysb_norm(const SpaceTimeField& v, double s, double b, const PhysicalParams& p);
/// xsb(s, b) + ysb(s, b - 1/2).
double zsb_norm(const SpaceTimeField& v, double s, double b, const PhysicalParams& p);

/// Space-time L4 norm of the windowed samples; exact in x (2N grid), rectangle rule in t.
double l4_norm(const SpaceTimeField& v);
/// l4_norm / xsb_norm(s = 0, b = 1/3). Throws DivisionByZeroNorm.
double l4_embedding_ratio(const SpaceTimeField& v, const PhysicalParams& p);

/// Free waves sum_k c_k exp(i (k x + phi(k) t)) with |c_k| ~ <k>^{-2} and
/// seeded random phases, sampled with dt = pi / (2 max|phi|) on [0, J dt),
/// J the smallest even 2^a 3^b 5^c with J dt >= window.
SpaceTimeField random_free_wave(int mode_count, std::uint64_t seed, const PhysicalParams& p, double window = 0.1);

/// -a k|k| + a k1|k1| + a (k-k1)|k-k1| + 3 k k1 (k-k1).
/// Throws DegenerateFrequencies if k, k1 or k-k1 vanishes.
double resonance_E(long k, long k1, double alpha);

struct NonresonanceReport {
  long k_max = 0;
  double alpha = 0.0;
  double c_alpha = 0.5;
  long pairs_checked = 0;
  /// |3 k k1 (k-k1)| >= (3/2) k^2
  long cubic_bound_violations = 0;
  /// |k1 (k-k1)| >= |k|/2
  long product_bound_violations = 0;
  /// |E| >= 3 C |k k1 (k-k1)| where max(|k|,|k1|,|k-k1|) >= max(1, 4a/3)
  long resonance_checked = 0;
  long resonance_violations = 0;
  /// smallest |E| / (3 |k k1 (k-k1)|) over the checked pairs
  double resonance_min_ratio = 0.0;
  /// one of |tau - phi(k)|, |tau1 - phi(k1)|, |tau - tau1 - phi(k-k1)| > (3/8) C k^2
  long trichotomy_checked = 0;
  long trichotomy_violations = 0;
  /// First few offending (k, k1) pairs of any kind.
  std::vector<std::pair<long, long>> examples;

  bool ok() const {
    return cubic_bound_violations == 0 && product_bound_violations == 0 && resonance_violations == 0 &&
           trichotomy_violations == 0;
  }
};

/// Exhaustive check over |k|, |k1| <= k_max with k k1 (k-k1) != 0. The
/// trichotomy is tested at tau_samples random (tau, tau1) pairs per (k, k1).
NonresonanceReport verify_nonresonance(long k_max, double alpha, double c_alpha = 0.5, int tau_samples = 2,
                                       std::uint64_t seed = 7);

}  // namespace benjamin
