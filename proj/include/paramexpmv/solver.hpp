#pragma once

#include "paramexpmv/arnoldi.hpp"

#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace paramexpmv {

/// Norm data entering the a priori bounds.
struct BoundInputs {
  double alpha = 0.0;  ///< sum_{l>=0} ||A_l||
  double beta = 0.0;   ///< mu(A_0) + sum_{l>=1} ||A_l||
  double mu0 = 0.0;    ///< mu(A_0)
  double a = 0.0;      ///< max_{l>=1} ||A_l||, zero when N = 0
};

/// coeff_norms[l] = ||A_l||.
BoundInputs make_bound_inputs(std::span<const double> coeff_norms, double mu0);

struct AprioriBounds {
  double krylov = 0.0;
  double truncation = 0.0;
  double total = 0.0;
};

/// A priori bounds after p steps with k = 1 + N(p-1) coefficients.
///
/// krylov:     2 sqrt((1-|eps|^2k)/(1-|eps|^2)) (t alpha)^p e^{t max(1,beta)} / p! ||u0||
/// truncation: N = 1: e^{t(mu0 + |eps| a)} (|eps| t a)^k / k! ||u0||
///             N > 1: C1 sum_{l<N} C2^{K+l} / (K+l-1)!, K = floor(k/N), with
///                    C2 = |eps|^N e N t a and
///                    C1 = |eps|^{sign(|eps|-1)} e^{t(mu0 + e N a) + C2 - 1} ||u0||
///             N = 0: zero (the series has a single term).
/// Evaluated in log space; results that overflow are +inf, never NaN. For
/// N > 1 and k <= N no bound is available and truncation is +inf.
AprioriBounds apriori_bounds(const BoundInputs& b, double t, double eps_abs, int p, int degree,
                             double u0_norm);

template <ScalarField S>
struct ErrorReport {
  double t = 0.0;
  S eps{};
  double apriori_krylov = 0.0;
  double apriori_truncation = 0.0;
  double apriori_total = 0.0;
  double aposteriori_krylov = 0.0;
  /// aposteriori_krylov plus, for N = 1, the truncation term
  /// e^{t(mu0+|eps| a)} (|eps| t a)^p / p! ||u0||.
  double total_estimate = 0.0;
};

struct BuildOptions {
  bool use_scaling = true;
  /// Overrides the heuristic scaling factor when set (ignored without scaling).
  std::optional<double> gamma;
  /// Accuracy of the norm and log-norm estimates feeding the bounds.
  double norm_tol = 1e-6;
};

/// Everything computed once per problem before the iteration starts.
template <ScalarField S>
struct SolverSetup {
  MatrixPolynomial<S> working;  ///< polynomial the iteration runs on (scaled)
  ScalingTransform scaling;
  BoundInputs bounds;  ///< for `working`
  double u0_norm = 0.0;
  Vector<S> u0;
};

template <ScalarField S>
SolverSetup<S> prepare(const MatrixPolynomial<S>& p, const Vector<S>& u0, const BuildOptions& options = {});

/// Explicit (t, eps) parameterization of u(t, eps) = exp(t A(eps)) u0 built
/// from one Arnoldi run. Immutable; every query only needs exp of the small
/// Hessenberg matrix plus products with the stored basis.
template <ScalarField S>
class ParameterizedSolution {
 public:
  ParameterizedSolution(std::shared_ptr<const SolverSetup<S>> setup,
                        std::shared_ptr<const KrylovDecomposition<S>> decomposition, int steps);

  int steps() const noexcept { return steps_; }
  Index dim() const noexcept { return setup_->working.dim(); }
  int degree() const noexcept { return setup_->working.degree(); }
  /// Available coefficient blocks, 1 + N(p-1).
  Index k_max() const noexcept { return 1 + static_cast<Index>(degree()) * (steps_ - 1); }
  double gamma() const noexcept { return setup_->scaling.gamma; }
  double u0_norm() const noexcept { return setup_->u0_norm; }
  const BoundInputs& bound_inputs() const noexcept { return setup_->bounds; }
  const SolverSetup<S>& setup() const noexcept { return *setup_; }
  const KrylovDecomposition<S>& decomposition() const noexcept { return *decomposition_; }
  /// True when the Krylov space closed at exactly this step count.
  bool breakdown() const noexcept;

  /// Same run, first `steps` iterations only.
  ParameterizedSolution truncated(int steps) const;

  /// c~_0(t), ..., c~_{k-1}(t) for the unscaled problem; k = 0 means k_max.
  std::vector<Vector<S>> coefficients(double t, Index k = 0) const;

  /// u~_k(t, eps) = sum_{l<k} eps^l c~_l(t); k = 0 means k_max.
  Vector<S> evaluate(double t, S eps, Index k = 0) const;

  AprioriBounds apriori(double t, S eps) const;

  /// Norm of the eps-contracted two-term residual expansion; zero on
  /// breakdown.
  double aposteriori_krylov(double t, S eps) const;

  ErrorReport<S> error_report(double t, S eps) const;

 private:
  Index resolve_k(Index k) const;
  /// Q_p exp(t H_p) e_1 ||u0|| restricted to its first k blocks, scaled
  /// coordinates.
  Vector<S> scaled_stack(double t, Index k) const;

  std::shared_ptr<const SolverSetup<S>> setup_;
  std::shared_ptr<const KrylovDecomposition<S>> decomposition_;
  int steps_;
};

template <ScalarField S>
ParameterizedSolution<S> build(const MatrixPolynomial<S>& p, const Vector<S>& u0, int steps,
                               const BuildOptions& options = {});

template <ScalarField S>
ErrorReport<S> aposteriori_estimate(const ParameterizedSolution<S>& s, double t, S eps) {
  return s.error_report(t, eps);
}

template <ScalarField S>
struct Target {
  double t = 0.0;
  S eps{};
};

struct AdaptiveOptions {
  double tol = 1e-8;
  int p_max = 200;
  /// Arnoldi steps between estimate evaluations.
  int check_interval = 5;
  BuildOptions build;
};

template <ScalarField S>
struct AdaptiveResult {
  ParameterizedSolution<S> solution;
  std::vector<ErrorReport<S>> reports;  ///< one per target, input order
  bool converged = false;
};

/// Grows the Arnoldi run until the largest total estimate over `targets` is
/// at most `tol`, the iteration breaks down, or p_max is reached (then
/// `converged` is false and the last state is returned).
template <ScalarField S>
AdaptiveResult<S> solve_adaptive(const MatrixPolynomial<S>& p, const Vector<S>& u0,
                                 std::span<const Target<S>> targets, const AdaptiveOptions& options);

}  // namespace paramexpmv
