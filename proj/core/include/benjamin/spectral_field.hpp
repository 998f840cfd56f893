#pragma once

#include <complex>
#include <span>
#include <vector>

namespace benjamin {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Coefficients of the dispersion relation. alpha weights the Hilbert
/// (Benjamin-Ono) part, mu is the mean of the original datum.
struct PhysicalParams {
  double alpha = 0.5;
  double mu = 0.0;
};

/// A real function on the torus [0, 2pi) held as its truncated Fourier series.
///
/// Only the half spectrum k = 0..N/2 is stored; negative wavenumbers are
/// recovered through Hermitian symmetry, so every SpectralField is real by
/// construction. Coefficients follow the convention
/// u_hat(k) = (1/2pi) * integral of u(x) exp(-ikx) dx.
class SpectralField {
 public:
  SpectralField() = default;
  /// Zero field with N modes. N must be even and >= 2.
  explicit SpectralField(int mode_count);

  /// Samples at x_j = 2 pi j / N.
  static SpectralField from_physical(std::span<const double> samples);
  /// Samples a callable f(x) on the N-point grid.
  template <class F>
  static SpectralField from_function(int mode_count, F&& f);

  std::vector<double> to_physical() const;

  int mode_count() const { return mode_count_; }
  int max_mode() const { return mode_count_ / 2; }

  /// Coefficient for any k in [-N/2+1, N/2]; zero outside the band.
  Complex coeff(int k) const;
  /// Sets coeff(k) for k >= 0 (and implicitly coeff(-k) = conj).
  /// The mean and Nyquist entries keep only the real part.
  void set_coeff(int k, Complex value);

  std::span<const Complex> half_spectrum() const { return coeffs_; }
  std::span<Complex> half_spectrum() { return coeffs_; }

  double mean() const { return coeffs_.empty() ? 0.0 : coeffs_[0].real(); }
  bool is_mean_zero() const { return mean() == 0.0; }

  SpectralField& operator+=(const SpectralField& other);
  SpectralField& operator-=(const SpectralField& other);
  SpectralField& operator*=(double scale);
  /// this += scale * other
  SpectralField& axpy(double scale, const SpectralField& other);

  bool all_finite() const;

 private:
  int mode_count_ = 0;
  std::vector<Complex> coeffs_;
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(double s, SpectralField a);
SpectralField operator*(SpectralField a, double s);

/// L2(T) inner product, 2 pi * sum over all k of a_k conj(b_k).
double inner(const SpectralField& a, const SpectralField& b);
double l2_norm(const SpectralField& u);
/// Discrete H^s norm, (2 pi sum <k>^{2s} |u_k|^2)^{1/2} with <k> = sqrt(1+k^2).
double sobolev_norm(const SpectralField& u, double s);

template <class F>
SpectralField SpectralField::from_function(int mode_count, F&& f) {
  std::vector<double> x(static_cast<std::size_t>(mode_count));
  for (int j = 0; j < mode_count; ++j) {
    x[static_cast<std::size_t>(j)] = f(kTwoPi * j / mode_count);
  }
  return from_physical(x);
}

}  // namespace benjamin
