#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "benjamin/gain.hpp"
#include "benjamin/spectral_field.hpp"

namespace benjamin {

// ---------------------------------------------------------------------------
// Localized control operator G and the simple damping K0 = G G*.
// ---------------------------------------------------------------------------

/// G h = g (h - integral of g h), computed on the grid and projected to zero mean.
/// G is self-adjoint on L2, so G* = G.
SpectralField apply_G(const SpectralField& h, const GainProfile& g);

/// K0 u = G G* u.
SpectralField apply_K0(const SpectralField& u, const GainProfile& g);

// ---------------------------------------------------------------------------
// Matrix representations on the truncated mean-zero subspace.
//
// The basis is the complex exponentials e^{ikx} for
//   k = -(N/2-1), ..., -1, 1, ..., N/2-1
// (dimension N-2); the mean and Nyquist modes are excluded. Real fields map to
// vectors with v(-k) = conj(v(k)).
// ---------------------------------------------------------------------------

int reduced_dimension(int mode_count);
/// Wavenumber carried by basis index i.
int basis_wavenumber(int mode_count, int index);
Eigen::VectorXcd to_mode_vector(const SpectralField& u);
/// Inverse of to_mode_vector; the Hermitian part of v is kept.
SpectralField from_mode_vector(const Eigen::VectorXcd& v, int mode_count);

/// Matrix of G (complex-linear extension) in the reduced basis.
Eigen::MatrixXcd control_matrix(const GainProfile& g);

/// Hermitian matrix with a cached eigen-decomposition.
class DenseHermitianOperator {
 public:
  DenseHermitianOperator() = default;
  DenseHermitianOperator(int mode_count, Eigen::MatrixXcd entries);

  int mode_count() const { return mode_count_; }
  int dim() const { return static_cast<int>(entries_.rows()); }
  const Eigen::MatrixXcd& entries() const { return entries_; }

  /// max |A - A^H| over all entries.
  double hermitian_residual() const;
  /// Eigenvalues of the Hermitian part, ascending.
  const Eigen::VectorXd& eigenvalues() const;
  double min_eigenvalue() const { return eigenvalues()(0); }
  double max_eigenvalue() const { return eigenvalues()(eigenvalues().size() - 1); }
  /// Ratio of extreme eigenvalues; infinite when the smallest is not positive.
  double condition_number() const;

  SpectralField apply(const SpectralField& u) const;

 private:
  int mode_count_ = 0;
  Eigen::MatrixXcd entries_;
  mutable std::optional<Eigen::VectorXd> eigenvalues_;
};

/// Cholesky factorization of a positive definite DenseHermitianOperator.
/// Throws SingularOperator when min eigenvalue < 1e-12 * max eigenvalue.
class HermitianSolver {
 public:
  explicit HermitianSolver(const DenseHermitianOperator& op);

  int mode_count() const { return mode_count_; }
  double condition_number() const { return condition_; }
  Eigen::VectorXcd solve(const Eigen::VectorXcd& rhs) const;
  SpectralField solve(const SpectralField& rhs) const;

 private:
  int mode_count_;
  double condition_;
  Eigen::LLT<Eigen::MatrixXcd> llt_;
};

// ---------------------------------------------------------------------------
// Prescribed-decay feedback K_lambda = G G* L_lambda^{-1}.
// ---------------------------------------------------------------------------

enum class AssemblyMethod {
  /// Closed-form time integral of each matrix entry. The group is diagonal in
  /// the Fourier basis, so entry (j,k) of the integrand is (GG*)_jk times a
  /// scalar exponential.
  kExactKernel,
  /// Composite Simpson in time with a doubling check.
  kSimpson,
  /// Composite Gauss-Legendre in time with a doubling check.
  kGaussLegendre,
};

/// phase_symbol over the reduced basis, in basis order.
std::vector<double> reduced_phases(int mode_count, const PhysicalParams& p);

/// Integral over [0, horizon] of exp(-decay t) P(j,k) exp(i (phase_k - phase_j) t),
/// entry by entry. Quadrature methods resolve the fastest entry with
/// nodes_per_cycle nodes per period and throw QuadratureTooCoarse if doubling
/// the node count moves any entry by more than 1e-8 of the largest entry.
Eigen::MatrixXcd time_integrated_conjugation(const Eigen::MatrixXcd& p, const std::vector<double>& phase,
                                             double horizon, double decay, AssemblyMethod method,
                                             int nodes_per_cycle);

struct LLambdaSpec {
  double lambda = 1.0;
  double a = 1.0;
  /// Quadrature nodes per oscillation period of the fastest entry (>= 8).
  int quad_nodes = 256;
  AssemblyMethod method = AssemblyMethod::kExactKernel;
};

/// L_lambda = int_0^a exp(-2 lambda tau) U(-tau) G G* U(-tau)* dtau.
DenseHermitianOperator assemble_L_lambda(const LLambdaSpec& spec, const GainProfile& g,
                                         const PhysicalParams& p, int mode_count);

/// Solves L v = u and returns G G* v. u must be mean-zero.
SpectralField apply_K_lambda(const SpectralField& u, const HermitianSolver& L, const GainProfile& g);

// ---------------------------------------------------------------------------
// Time-varying feedback.
// ---------------------------------------------------------------------------

struct TimeVaryingSpec {
  double lambda = 2.0;
  double period_T = 1.0;
  double r0 = 0.1;
  double delta = 0.05;
};

/// Degree-7 smoothstep: 0 below 0, 1 above 1, C^3 at both ends.
double smoothstep7(double x);

/// rho(r) = 1 for r <= r0, 0 for r >= 1, nonincreasing in between.
double cutoff_rho(double r, const TimeVaryingSpec& spec);

/// 2-periodic; 1 on [delta, 1-delta], 0 on [1, 2].
double cutoff_theta(double t, const TimeVaryingSpec& spec);

/// K(u,t) = rho(|u|^2_s) [theta(t/T) K_lambda u + theta(t/T - 1) G G* u]
///          + (1 - rho(|u|^2_s)) G G* u.
SpectralField time_varying_feedback(const SpectralField& u, double t, const TimeVaryingSpec& spec,
                                    const HermitianSolver& L, const GainProfile& g, double s);

/// v with G v = K(u, t).
SpectralField time_varying_control_field(const SpectralField& u, double t, const TimeVaryingSpec& spec,
                                    const HermitianSolver& L, const GainProfile& g, double s);

}  // namespace benjamin
