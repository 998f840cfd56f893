#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "benjamin/control_signal.hpp"
#include "benjamin/diagnostics.hpp"
#include "benjamin/gain.hpp"
#include "benjamin/operators.hpp"

namespace benjamin {

// Feedback laws. The closed-loop forcing is -K u.

struct NoFeedback {};

/// Open-loop forcing G h(t).
struct ExternalControl {
  ControlSignal h;
};

/// K u = gain * G G* u. A negative gain damps when integrating backward in time.
struct DampingGGstar {
  double gain = 1.0;
};

struct KLambda {
  LLambdaSpec spec;
};

/// K(u, t); L_lambda is assembled with spec.lambda and the given horizon/method.
struct TimeVarying {
  TimeVaryingSpec spec;
  double a = 1.0;
  AssemblyMethod method = AssemblyMethod::kExactKernel;
};

using FeedbackLaw = std::variant<NoFeedback, ExternalControl, DampingGGstar, KLambda, TimeVarying>;

std::string feedback_name(const FeedbackLaw& law);

struct GainSpec {
  enum class Kind { kRaisedCosine, kUniform };
  Kind kind = Kind::kRaisedCosine;
  double center = kPi;
  double width = 2.0;

  GainProfile build(int mode_count) const;
};

struct InitialCondition {
  enum class Kind { kZero, kCosine, kSine, kRandom, kFile };
  Kind kind = Kind::kCosine;
  double amplitude = 0.1;
  int mode = 1;
  /// For kRandom: target norm in H^norm_s (0 keeps the raw spectrum).
  double norm = 0.0;
  double norm_s = 0.0;
  std::uint64_t seed = 1;
  /// For kFile: lines "k re im", k >= 1.
  std::string path;

  SpectralField build(int mode_count) const;
};

struct RunConfig {
  int N = 128;
  /// 0 selects resolving_time_step(N, params).
  double dt = 0.0;
  double t0 = 0.0;
  double T_final = 1.0;
  PhysicalParams params;
  GainSpec gain;
  FeedbackLaw feedback = NoFeedback{};
  InitialCondition initial;
  int sample_stride = 1;
  /// Sobolev index for the hs diagnostic and for the cutoff rho.
  double s = 1.0;
  /// Disables d/dx(u^2) when false.
  bool nonlinear = true;
  /// Reruns at dt/2 and compares terminal L2 norms.
  bool self_check = false;
  std::optional<std::pair<double, double>> fit_window;
  std::string output_dir = "output";
  std::uint64_t seed = 1;

  /// Throws ConfigError.
  void validate() const;
  /// dt, or the resolving step when dt is 0.
  double time_step() const;
  /// [0.2 T_final, T_final] unless overridden.
  std::pair<double, double> decay_window() const;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<SpectralField> states;
  std::vector<DiagnosticsRecord> diagnostics;

  std::size_t size() const { return times.size(); }
  const SpectralField& final_state() const { return states.back(); }
  std::vector<double> l2_series() const;
  std::vector<double> hs_series() const;
};

/// Fixed-step ETDRK4 integrator for
///   u_t = alpha H u_xx + u_xxx - 2 mu u_x - (u^2)_x + f(u, t)
/// in the mean-zero frame. The dispersive part is integrated exactly.
class Evolution {
 public:
  explicit Evolution(const RunConfig& cfg);

  const RunConfig& config() const { return cfg_; }
  const GainProfile& gain() const { return gain_; }

  /// f(u, t): -K u for feedback laws, G h(t) for an external control.
  SpectralField forcing(const SpectralField& u, double t) const;
  /// h with f(u, t) = G h.
  SpectralField control(const SpectralField& u, double t) const;
  /// Full right-hand side, linear part included.
  SpectralField rhs(const SpectralField& u, double t) const;
  /// -<f, u> for feedback laws, |h(t)|^2 for an external control.
  double control_energy(const SpectralField& u, double t) const;
  DiagnosticsRecord diagnose(const SpectralField& u, double t) const;

  /// Integrates from t_start to t_end with |dt| = step (direction taken from
  /// the endpoints). (t_end - t_start) / step is rounded to the nearest
  /// integer; sampling every `stride` steps plus the final state.
  Trajectory run(const SpectralField& u0, double t_start, double t_end, double step, int stride) const;

 private:
  SpectralField nonlinear_part(const SpectralField& u, double t) const;

  RunConfig cfg_;
  GainProfile gain_;
  std::shared_ptr<const HermitianSolver> l_solver_;
};

/// Right-hand side for a one-off evaluation.
SpectralField rhs(const SpectralField& u, double t, const RunConfig& cfg);

/// Runs cfg from its initial condition over [t0, T_final].
/// Throws NonFiniteState, and StepTooLarge in self-check mode.
Trajectory integrate(const RunConfig& cfg);
Trajectory integrate(const RunConfig& cfg, const SpectralField& u0);

/// integrate() with the feedback replaced by the open-loop control h.
Trajectory controlled_run(const RunConfig& cfg, const ControlSignal& h);
Trajectory controlled_run(const RunConfig& cfg, const ControlSignal& h, const SpectralField& u0);

/// min(1e-3, 2 pi / (10 max|phi|)): one tenth of the fastest retained period.
double resolving_time_step(int mode_count, const PhysicalParams& p);

}  // namespace benjamin
