#pragma once

#include "benjamin/control_signal.hpp"
#include "benjamin/gain.hpp"
#include "benjamin/operators.hpp"

namespace benjamin {

struct ControlProblem {
  SpectralField u0;
  SpectralField u1;
  double horizon_T = 1.0;
  /// Index in which the control norm is reported; synthesis itself is L2.
  double s = 0.0;
};

/// Observability Gramian W_T = int_0^T U(T-s) G G* U(T-s)* ds on the mean-zero modes.
DenseHermitianOperator assemble_gramian(double T, const GainProfile& g, const PhysicalParams& p, int mode_count,
                                        AssemblyMethod method = AssemblyMethod::kExactKernel,
                                        int nodes_per_cycle = 16);

/// Smallest eigenvalue of W.
double observability_constant(const DenseHermitianOperator& W);

/// Minimal-L2 (HUM) control for the linearized equation.
///
/// The control is h(t) = G* U(T-t)* eta with W_T eta = u1 - U(T) u0, so that
/// U(T) u0 + int_0^T U(T-s) G h(s) ds = u1.
class HumSynthesizer {
 public:
  /// Throws SingularOperator when cond(W) > 1e12.
  HumSynthesizer(DenseHermitianOperator W, GainProfile g, PhysicalParams p, double T);

  double horizon() const { return T_; }
  const DenseHermitianOperator& gramian() const { return W_; }
  double condition_number() const { return solver_.condition_number(); }
  /// Operator norm of G on the truncated mean-zero space.
  double g_norm() const { return g_norm_; }
  /// Bound nu with |h|_{L2(0,T;L2)} <= nu (|u0| + |u1|).
  double nu() const;

  SpectralField adjoint_state(const SpectralField& u0, const SpectralField& u1) const;
  SpectralField control_at(const SpectralField& eta, double t) const;
  /// h sampled on `intervals` equal steps of [0, T].
  ControlSignal synthesize(const ControlProblem& prob, int intervals) const;

 private:
  DenseHermitianOperator W_;
  HermitianSolver solver_;
  GainProfile g_;
  PhysicalParams p_;
  double T_;
  double g_norm_ = 0.0;
};

ControlSignal solve_control(const ControlProblem& prob, const DenseHermitianOperator& W, const GainProfile& g,
                            const PhysicalParams& p, int intervals);

}  // namespace benjamin
