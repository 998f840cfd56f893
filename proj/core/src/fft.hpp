#pragma once

// Thin FFTW wrapper. Plans are created once per (kind, size) under a mutex
// and reused through the new-array execute interface, which is thread safe.

#include <complex>
#include <span>

namespace benjamin::fft {

using Complex = std::complex<double>;

/// out[k] = (1/n) sum_j x[j] exp(-2 pi i j k / n), k = 0..n/2.
void real_forward(std::span<const double> x, std::span<Complex> out);

/// x[j] = sum over the Hermitian extension of c, i.e. the synthesis
/// sum_k c[k] exp(2 pi i j k / n) for a real signal. c has n/2+1 entries.
void real_inverse(std::span<const Complex> c, std::span<double> x);

/// out[k] = sum_j x[j] exp(-2 pi i j k / n) (unscaled).
void complex_forward(std::span<const Complex> x, std::span<Complex> out);

/// out[j] = sum_k x[k] exp(+2 pi i j k / n) (unscaled).
void complex_inverse(std::span<const Complex> x, std::span<Complex> out);

}  // namespace benjamin::fft
