#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace benjamin::fft {
namespace {

enum class Kind { kR2C, kC2R, kForward, kBackward };

struct Plan {
  fftw_plan handle = nullptr;
  ~Plan() {
    if (handle != nullptr) fftw_destroy_plan(handle);
  }
};

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

// FFTW_UNALIGNED lets the plan run on std::vector storage.
const Plan& plan_for(Kind kind, int n) {
  static std::map<std::pair<Kind, int>, std::unique_ptr<Plan>> cache;
  std::lock_guard<std::mutex> lock(planner_mutex());
  auto& slot = cache[{kind, n}];
  if (slot) return *slot;

  slot = std::make_unique<Plan>();
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  std::vector<double> re(static_cast<std::size_t>(n));
  std::vector<Complex> a(static_cast<std::size_t>(n)), b(static_cast<std::size_t>(n));
  auto* ca = reinterpret_cast<fftw_complex*>(a.data());
  auto* cb = reinterpret_cast<fftw_complex*>(b.data());
  switch (kind) {
    case Kind::kR2C:
      slot->handle = fftw_plan_dft_r2c_1d(n, re.data(), ca, flags);
      break;
    case Kind::kC2R:
      slot->handle = fftw_plan_dft_c2r_1d(n, ca, re.data(), flags);
      break;
    case Kind::kForward:
      slot->handle = fftw_plan_dft_1d(n, ca, cb, FFTW_FORWARD, flags);
      break;
    case Kind::kBackward:
      slot->handle = fftw_plan_dft_1d(n, ca, cb, FFTW_BACKWARD, flags);
      break;
  }
  if (slot->handle == nullptr) throw std::runtime_error("fftw planning failed");
  return *slot;
}

}  // namespace

void real_forward(std::span<const double> x, std::span<Complex> out) {
  const int n = static_cast<int>(x.size());
  if (out.size() != x.size() / 2 + 1) throw std::invalid_argument("real_forward: size mismatch");
  // r2c does not modify its input, the cast is only to satisfy the C API.
  fftw_execute_dft_r2c(plan_for(Kind::kR2C, n).handle, const_cast<double*>(x.data()),
                       reinterpret_cast<fftw_complex*>(out.data()));
  const double scale = 1.0 / n;
  for (auto& c : out) c *= scale;
}

void real_inverse(std::span<const Complex> c, std::span<double> x) {
  const int n = static_cast<int>(x.size());
  if (c.size() != x.size() / 2 + 1) throw std::invalid_argument("real_inverse: size mismatch");
  // c2r destroys its input.
  std::vector<Complex> scratch(c.begin(), c.end());
  fftw_execute_dft_c2r(plan_for(Kind::kC2R, n).handle,
                       reinterpret_cast<fftw_complex*>(scratch.data()), x.data());
}

void complex_forward(std::span<const Complex> x, std::span<Complex> out) {
  const int n = static_cast<int>(x.size());
  if (out.size() != x.size()) throw std::invalid_argument("complex_forward: size mismatch");
  std::vector<Complex> scratch(x.begin(), x.end());
  fftw_execute_dft(plan_for(Kind::kForward, n).handle,
                   reinterpret_cast<fftw_complex*>(scratch.data()),
                   reinterpret_cast<fftw_complex*>(out.data()));
}

void complex_inverse(std::span<const Complex> x, std::span<Complex> out) {
  const int n = static_cast<int>(x.size());
  if (out.size() != x.size()) throw std::invalid_argument("complex_inverse: size mismatch");
  std::vector<Complex> scratch(x.begin(), x.end());
  fftw_execute_dft(plan_for(Kind::kBackward, n).handle,
                   reinterpret_cast<fftw_complex*>(scratch.data()),
                   reinterpret_cast<fftw_complex*>(out.data()));
}

}  // namespace benjamin::fft
