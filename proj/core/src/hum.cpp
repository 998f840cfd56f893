#include "benjamin/hum.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

#include "benjamin/errors.hpp"
#include "benjamin/spectral_ops.hpp"

namespace benjamin {

DenseHermitianOperator assemble_gramian(double T, const GainProfile& g, const PhysicalParams& p, int mode_count,
                                        AssemblyMethod method, int nodes_per_cycle) {
  if (!(T > 0.0)) throw std::invalid_argument("assemble_gramian: T must be positive");
  if (g.mode_count() != mode_count) throw std::invalid_argument("assemble_gramian: gain grid mismatch");
  const Eigen::MatrixXcd gm = control_matrix(g);
  // U(sigma) P U(sigma)* has entries P(j,k) exp(i (phi_j - phi_k) sigma): the
  // L_lambda kernel with the phases negated.
  auto phase = reduced_phases(mode_count, p);
  for (double& v : phase) v = -v;
  return DenseHermitianOperator(mode_count,
                                time_integrated_conjugation(gm * gm, phase, T, 0.0, method, nodes_per_cycle));
}

double observability_constant(const DenseHermitianOperator& W) { return W.min_eigenvalue(); }

namespace {

HermitianSolver guarded_solver(const DenseHermitianOperator& W) {
  const double cond = W.condition_number();
  if (!(cond <= 1e12)) {
    throw SingularOperator("Gramian condition number " + std::to_string(cond) + " exceeds 1e12");
  }
  return HermitianSolver(W);
}

}  // namespace

HumSynthesizer::HumSynthesizer(DenseHermitianOperator W, GainProfile g, PhysicalParams p, double T)
    : W_(std::move(W)), solver_(guarded_solver(W_)), g_(std::move(g)), p_(p), T_(T) {
  if (!(T > 0.0)) throw std::invalid_argument("HumSynthesizer: T must be positive");
  const Eigen::MatrixXcd gm = control_matrix(g_);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (gm + gm.adjoint()), Eigen::EigenvaluesOnly);
  g_norm_ = es.eigenvalues().cwiseAbs().maxCoeff();
}

double HumSynthesizer::nu() const {
  // |U(T)| = 1, so (1 + |U(T)|) = 2.
  return std::sqrt(T_) * g_norm_ * 2.0 / W_.min_eigenvalue();
}

SpectralField HumSynthesizer::adjoint_state(const SpectralField& u0, const SpectralField& u1) const {
  if (u0.mode_count() != W_.mode_count() || u1.mode_count() != W_.mode_count()) {
    throw std::invalid_argument("HumSynthesizer: state size does not match the Gramian");
  }
  SpectralField target = u1 - semigroup_apply(u0, T_, p_);
  zero_nyquist(target);
  return solver_.solve(project_mean_zero(std::move(target)));
}

SpectralField HumSynthesizer::control_at(const SpectralField& eta, double t) const {
  return apply_G(semigroup_apply(eta, t - T_, p_), g_);
}

ControlSignal HumSynthesizer::synthesize(const ControlProblem& prob, int intervals) const {
  if (std::abs(prob.horizon_T - T_) > 1e-12 * T_) throw std::invalid_argument("HumSynthesizer: horizon mismatch");
  const SpectralField eta = adjoint_state(prob.u0, prob.u1);
  auto times = uniform_times(0.0, T_, intervals);
  std::vector<SpectralField> values;
  values.reserve(times.size());
  for (double t : times) values.push_back(control_at(eta, t));
  return ControlSignal(std::move(times), std::move(values));
}

ControlSignal solve_control(const ControlProblem& prob, const DenseHermitianOperator& W, const GainProfile& g,
                            const PhysicalParams& p, int intervals) {
  return HumSynthesizer(W, g, p, prob.horizon_T).synthesize(prob, intervals);
}

}  // namespace benjamin
