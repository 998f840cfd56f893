#include "benjamin/spectral_field.hpp"

#include <cmath>
#include <stdexcept>

#include "fft.hpp"

namespace benjamin {

SpectralField::SpectralField(int mode_count)
    : mode_count_(mode_count), coeffs_(static_cast<std::size_t>(mode_count / 2 + 1)) {
  if (mode_count < 2 || mode_count % 2 != 0) {
    throw std::invalid_argument("SpectralField: mode count must be even and >= 2");
  }
}

SpectralField SpectralField::from_physical(std::span<const double> samples) {
  SpectralField u(static_cast<int>(samples.size()));
  fft::real_forward(samples, u.coeffs_);
  u.coeffs_.front().imag(0.0);
  u.coeffs_.back().imag(0.0);
  return u;
}

std::vector<double> SpectralField::to_physical() const {
  std::vector<double> x(static_cast<std::size_t>(mode_count_));
  fft::real_inverse(coeffs_, x);
  return x;
}

Complex SpectralField::coeff(int k) const {
  if (k > max_mode() || k <= -max_mode()) return {};
  if (k >= 0) return coeffs_[static_cast<std::size_t>(k)];
  return std::conj(coeffs_[static_cast<std::size_t>(-k)]);
}

void SpectralField::set_coeff(int k, Complex value) {
  if (k < 0 || k > max_mode()) throw std::out_of_range("SpectralField::set_coeff");
  if (k == 0 || k == max_mode()) value.imag(0.0);
  coeffs_[static_cast<std::size_t>(k)] = value;
}

SpectralField& SpectralField::operator+=(const SpectralField& other) {
  if (other.mode_count_ != mode_count_) throw std::invalid_argument("mode count mismatch");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
  if (other.mode_count_ != mode_count_) throw std::invalid_argument("mode count mismatch");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
  return *this;
}

SpectralField& SpectralField::operator*=(double scale) {
  for (auto& c : coeffs_) c *= scale;
  return *this;
}

SpectralField& SpectralField::axpy(double scale, const SpectralField& other) {
  if (other.mode_count_ != mode_count_) throw std::invalid_argument("mode count mismatch");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += scale * other.coeffs_[i];
  return *this;
}

bool SpectralField::all_finite() const {
  for (const auto& c : coeffs_) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
  }
  return true;
}

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
SpectralField operator*(double s, SpectralField a) { return a *= s; }
SpectralField operator*(SpectralField a, double s) { return a *= s; }

namespace {

// Sum over the full band [-N/2+1, N/2] of w(|k|) * Re(a_k conj b_k), using
// the Hermitian pairing of +k and -k.
template <class Weight>
double weighted_pairing(const SpectralField& a, const SpectralField& b, Weight w) {
  if (a.mode_count() != b.mode_count()) throw std::invalid_argument("mode count mismatch");
  const auto ca = a.half_spectrum();
  const auto cb = b.half_spectrum();
  const int half = a.max_mode();
  double sum = w(0) * (ca[0] * std::conj(cb[0])).real();
  for (int k = 1; k < half; ++k) {
    sum += 2.0 * w(k) * (ca[static_cast<std::size_t>(k)] * std::conj(cb[static_cast<std::size_t>(k)])).real();
  }
  sum += w(half) * (ca[static_cast<std::size_t>(half)] * std::conj(cb[static_cast<std::size_t>(half)])).real();
  return kTwoPi * sum;
}

}  // namespace

double inner(const SpectralField& a, const SpectralField& b) {
  return weighted_pairing(a, b, [](int) { return 1.0; });
}

double l2_norm(const SpectralField& u) { return std::sqrt(inner(u, u)); }

double sobolev_norm(const SpectralField& u, double s) {
  if (s == 0.0) return l2_norm(u);
  return std::sqrt(weighted_pairing(u, u, [s](int k) {
    return std::pow(1.0 + static_cast<double>(k) * k, s);
  }));
}

}  // namespace benjamin
