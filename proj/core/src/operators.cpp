#include "benjamin/operators.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>

#include "benjamin/errors.hpp"
#include "benjamin/quadrature.hpp"
#include "benjamin/spectral_ops.hpp"

namespace benjamin {

SpectralField apply_G(const SpectralField& h, const GainProfile& g) {
  const int n = h.mode_count();
  if (g.mode_count() != n) throw std::invalid_argument("apply_G: gain sampled on a different grid");
  auto x = h.to_physical();
  const auto gs = g.samples();
  double weighted = 0.0;
  for (int j = 0; j < n; ++j) weighted += gs[static_cast<std::size_t>(j)] * x[static_cast<std::size_t>(j)];
  weighted *= kTwoPi / n;
  for (int j = 0; j < n; ++j) {
    x[static_cast<std::size_t>(j)] = gs[static_cast<std::size_t>(j)] * (x[static_cast<std::size_t>(j)] - weighted);
  }
  auto out = SpectralField::from_physical(x);
  zero_nyquist(out);
  return project_mean_zero(std::move(out));
}

SpectralField apply_K0(const SpectralField& u, const GainProfile& g) { return apply_G(apply_G(u, g), g); }

int reduced_dimension(int mode_count) { return mode_count - 2; }

int basis_wavenumber(int mode_count, int index) {
  const int half = mode_count / 2 - 1;
  return index < half ? index - half : index - half + 1;
}

Eigen::VectorXcd to_mode_vector(const SpectralField& u) {
  const int n = u.mode_count();
  Eigen::VectorXcd v(reduced_dimension(n));
  for (int i = 0; i < v.size(); ++i) v(i) = u.coeff(basis_wavenumber(n, i));
  return v;
}

SpectralField from_mode_vector(const Eigen::VectorXcd& v, int mode_count) {
  if (v.size() != reduced_dimension(mode_count)) throw std::invalid_argument("from_mode_vector: size mismatch");
  SpectralField u(mode_count);
  const int half = mode_count / 2 - 1;
  for (int k = 1; k <= half; ++k) {
    const Complex plus = v(half + k - 1);
    const Complex minus = v(half - k);
    u.set_coeff(k, 0.5 * (plus + std::conj(minus)));
  }
  return u;
}

Eigen::MatrixXcd control_matrix(const GainProfile& g) {
  const int n = g.mode_count();
  const int dim = reduced_dimension(n);
  Eigen::MatrixXcd m(dim, dim);
  for (int col = 0; col < dim; ++col) {
    const int k = basis_wavenumber(n, col);
    const int ak = std::abs(k);
    SpectralField c(n), s(n);
    c.set_coeff(ak, 0.5);
    s.set_coeff(ak, Complex{0.0, -0.5});
    // e^{ikx} = cos(|k|x) + i sgn(k) sin(|k|x)
    const double sgn = k > 0 ? 1.0 : -1.0;
    m.col(col) = to_mode_vector(apply_G(c, g)) + Complex{0.0, sgn} * to_mode_vector(apply_G(s, g));
  }
  return m;
}

DenseHermitianOperator::DenseHermitianOperator(int mode_count, Eigen::MatrixXcd entries)
    : mode_count_(mode_count), entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols() || entries_.rows() != reduced_dimension(mode_count)) {
    throw std::invalid_argument("DenseHermitianOperator: matrix size does not match mode count");
  }
}

double DenseHermitianOperator::hermitian_residual() const {
  return (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
}

const Eigen::VectorXd& DenseHermitianOperator::eigenvalues() const {
  if (!eigenvalues_) {
    const Eigen::MatrixXcd sym = 0.5 * (entries_ + entries_.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(sym, Eigen::EigenvaluesOnly);
    eigenvalues_ = es.eigenvalues();
  }
  return *eigenvalues_;
}

double DenseHermitianOperator::condition_number() const {
  const double lo = min_eigenvalue();
  if (!(lo > 0.0)) return std::numeric_limits<double>::infinity();
  return max_eigenvalue() / lo;
}

SpectralField DenseHermitianOperator::apply(const SpectralField& u) const {
  return from_mode_vector(entries_ * to_mode_vector(u), mode_count_);
}

HermitianSolver::HermitianSolver(const DenseHermitianOperator& op)
    : mode_count_(op.mode_count()), condition_(op.condition_number()) {
  const double hi = op.max_eigenvalue();
  const double lo = op.min_eigenvalue();
  if (!(hi > 0.0) || lo < 1e-12 * hi) {
    throw SingularOperator("operator is numerically singular (min/max eigenvalue = " +
                           std::to_string(lo / hi) + ")");
  }
  llt_.compute(0.5 * (op.entries() + op.entries().adjoint()));
  if (llt_.info() != Eigen::Success) throw SingularOperator("Cholesky factorization failed");
}

Eigen::VectorXcd HermitianSolver::solve(const Eigen::VectorXcd& rhs) const { return llt_.solve(rhs); }

SpectralField HermitianSolver::solve(const SpectralField& rhs) const {
  return from_mode_vector(solve(to_mode_vector(rhs)), mode_count_);
}

namespace {

// entries(j,k) = P(j,k) * kernel(phi_k - phi_j)
template <class Kernel>
Eigen::MatrixXcd modulate(const Eigen::MatrixXcd& p, const std::vector<double>& phase, Kernel kernel) {
  Eigen::MatrixXcd out(p.rows(), p.cols());
  for (Eigen::Index k = 0; k < p.cols(); ++k) {
    for (Eigen::Index j = 0; j < p.rows(); ++j) {
      out(j, k) = p(j, k) * kernel(phase[static_cast<std::size_t>(k)] - phase[static_cast<std::size_t>(j)]);
    }
  }
  return out;
}

Eigen::MatrixXcd quadrature_modulate(const Eigen::MatrixXcd& p, const std::vector<double>& phase,
                                     const QuadratureRule& rule, double decay) {
  return modulate(p, phase, [&](double omega) {
    Complex sum{};
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double t = rule.nodes[i];
      sum += rule.weights[i] * std::exp(Complex{-decay * t, omega * t});
    }
    return sum;
  });
}

}  // namespace

std::vector<double> reduced_phases(int n, const PhysicalParams& p) {
  std::vector<double> phase(static_cast<std::size_t>(reduced_dimension(n)));
  for (int i = 0; i < reduced_dimension(n); ++i) phase[static_cast<std::size_t>(i)] = phase_symbol(basis_wavenumber(n, i), p);
  return phase;
}

Eigen::MatrixXcd time_integrated_conjugation(const Eigen::MatrixXcd& p, const std::vector<double>& phase,
                                             double horizon, double decay, AssemblyMethod method,
                                             int nodes_per_cycle) {
  if (method == AssemblyMethod::kExactKernel) {
    return modulate(p, phase, [&](double omega) { return exp_integral(Complex{decay, -omega}, horizon); });
  }
  if (nodes_per_cycle < 8) throw std::invalid_argument("quadrature needs at least 8 nodes per cycle");
  double max_omega = 0.0;
  for (double a : phase) max_omega = std::max(max_omega, 2.0 * std::abs(a));
  const int cycles = std::max(1, static_cast<int>(std::ceil(horizon * (max_omega + decay) / kTwoPi)));

  auto rule_for = [&](int refinement) {
    if (method == AssemblyMethod::kSimpson) {
      return composite_simpson(0.0, horizon, cycles * nodes_per_cycle * refinement);
    }
    return composite_gauss_legendre(0.0, horizon, std::max(1, cycles * nodes_per_cycle * refinement / 8), 8);
  };
  Eigen::MatrixXcd coarse = quadrature_modulate(p, phase, rule_for(1), decay);
  Eigen::MatrixXcd fine = quadrature_modulate(p, phase, rule_for(2), decay);
  const double scale = fine.cwiseAbs().maxCoeff();
  const double change = (fine - coarse).cwiseAbs().maxCoeff();
  if (change > 1e-8 * scale) {
    throw QuadratureTooCoarse("doubling the quadrature changed the operator by " + std::to_string(change / scale) +
                              " (relative)");
  }
  return fine;
}

DenseHermitianOperator assemble_L_lambda(const LLambdaSpec& spec, const GainProfile& g, const PhysicalParams& p,
                                         int mode_count) {
  if (spec.lambda < 0.0) throw std::invalid_argument("assemble_L_lambda: lambda must be >= 0");
  if (!(spec.a > 0.0)) throw std::invalid_argument("assemble_L_lambda: a must be positive");
  if (g.mode_count() != mode_count) throw std::invalid_argument("assemble_L_lambda: gain grid mismatch");
  const Eigen::MatrixXcd gm = control_matrix(g);
  const Eigen::MatrixXcd ggs = gm * gm;
  const auto phase = reduced_phases(mode_count, p);
  return DenseHermitianOperator(
      mode_count, time_integrated_conjugation(ggs, phase, spec.a, 2.0 * spec.lambda, spec.method, spec.quad_nodes));
}

SpectralField apply_K_lambda(const SpectralField& u, const HermitianSolver& L, const GainProfile& g) {
  return apply_K0(L.solve(u), g);
}

double smoothstep7(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double x4 = x * x * x * x;
  return std::min(1.0, x4 * (35.0 + x * (-84.0 + x * (70.0 - 20.0 * x))));
}

double cutoff_rho(double r, const TimeVaryingSpec& spec) {
  return 1.0 - smoothstep7((r - spec.r0) / (1.0 - spec.r0));
}

double cutoff_theta(double t, const TimeVaryingSpec& spec) {
  double tau = std::fmod(t, 2.0);
  if (tau < 0.0) tau += 2.0;
  if (tau >= 1.0) return 0.0;
  if (tau < spec.delta) return smoothstep7(tau / spec.delta);
  if (tau > 1.0 - spec.delta) return smoothstep7((1.0 - tau) / spec.delta);
  return 1.0;
}

SpectralField time_varying_feedback(const SpectralField& u, double t, const TimeVaryingSpec& spec,
                                    const HermitianSolver& L, const GainProfile& g, double s) {
  return apply_G(time_varying_control_field(u, t, spec, L, g, s), g);
}

SpectralField time_varying_control_field(const SpectralField& u, double t, const TimeVaryingSpec& spec,
                                         const HermitianSolver& L, const GainProfile& g, double s) {
  const double norm = sobolev_norm(u, s);
  const double rho = cutoff_rho(norm * norm, spec);
  const double active = rho * cutoff_theta(t / spec.period_T, spec);
  const double damping = rho * cutoff_theta(t / spec.period_T - 1.0, spec) + (1.0 - rho);

  SpectralField out(u.mode_count());
  if (damping != 0.0) out.axpy(damping, apply_G(u, g));
  if (active != 0.0) out.axpy(active, apply_G(L.solve(u), g));
  return out;
}

}  // namespace benjamin
