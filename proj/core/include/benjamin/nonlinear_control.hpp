#pragma once

#include <memory>
#include <vector>

#include "benjamin/evolution.hpp"
#include "benjamin/hum.hpp"

namespace benjamin {

/// w(T, u) = int_0^T U(T - tau) (u^2)_x(tau) dtau over the trajectory samples.
///
/// The nonlinear term is interpolated linearly between samples and each
/// interval is integrated exactly against the oscillating exponential.
SpectralField w_functional(const Trajectory& traj, double T, const PhysicalParams& p);

struct PicardIterate {
  int index = 0;
  /// sup over samples of |u^n(t) - u^{n-1}(t)|_{H^s}
  double distance = 0.0;
  /// distance / previous distance (0 for the first iterate)
  double ratio = 0.0;
  /// |u^n(T) - u1|_{H^s}
  double residual = 0.0;
};

struct PicardResult {
  ControlSignal control;
  Trajectory trajectory;
  /// Adjoint state of the final control, h(t) = G U(t - T) eta.
  SpectralField eta;
  std::shared_ptr<const HumSynthesizer> synthesizer;
  int iterations = 0;
  std::vector<PicardIterate> history;
  double residual = 0.0;
  /// residual / |u1|_{H^s}, or the residual itself when u1 = 0.
  double relative_residual = 0.0;
  /// Largest successive-distance ratio observed after the first iterate.
  double contraction_estimate = 0.0;
  double gramian_condition = 0.0;
};

/// Exact control of the nonlinear equation from u0 to u1 on [0, T].
///
/// Starting from the linear HUM control h_0 = Phi(u0, u1), each iterate solves
/// the forced nonlinear equation and updates h_{n+1} = Phi(u0, u1 + w(T, u^n)).
/// A fixed point reaches u1 exactly. cfg supplies N, dt, params, gain and the
/// nonlinear flag; its feedback and time span are ignored.
///
/// Throws NoContraction when the distance ratio exceeds 0.9 three times in a
/// row or max_iter is exhausted; SingularOperator from the Gramian guard.
PicardResult picard_control(const SpectralField& u0, const SpectralField& u1, double T, double s, double tol,
                            int max_iter, const RunConfig& cfg);

struct LargeDataOptions {
  /// H^s norm below which the damping phases stop.
  double small_norm = 1e-2;
  /// Cap on each damping phase.
  double max_damp_time = 50.0;
  /// Damping phases advance in chunks of this length until small_norm is reached.
  double damp_chunk = 0.5;
  /// Closed-loop step during damping (0: the run's time step). Replays use twice this.
  double damp_dt = 0.0;
  /// K_lambda parameters for the damping phases.
  double damp_lambda = 1.0;
  double damp_horizon = 1.0;
  double control_time = 1.0;
  double picard_tol = 1e-12;
  int max_iter = 20;
  double s = 0.0;
};

struct LargeDataResult {
  /// Composite control on [0, T1 + T2 + T3].
  ControlSignal control;
  /// Open-loop run of the composite control from u0.
  Trajectory replay;
  double damp_forward_time = 0.0;
  double control_time = 0.0;
  double damp_backward_time = 0.0;
  double small_start_norm = 0.0;
  double small_target_norm = 0.0;
  int picard_iterations = 0;
  double residual = 0.0;
  double relative_residual = 0.0;
};

/// Large-data control by composition: damp u0 forward under K_lambda, damp u1
/// backward in time (forward damping of its reflection, mapped back), and join
/// the two small states with picard_control. The damping phases are replayed
/// open loop from their recorded controls; the local control starts from the
/// replayed state. The gain must be symmetric about its center.
LargeDataResult large_data_control(const SpectralField& u0, const SpectralField& u1, const LargeDataOptions& opts,
                                   const RunConfig& cfg);

}  // namespace benjamin
