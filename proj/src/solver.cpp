#include "paramexpmv/solver.hpp"

#include "paramexpmv/matfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace paramexpmv {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Exponentiates a log-space bound; -inf maps to zero, overflow to +inf.
double from_log(double log_value) {
  if (std::isnan(log_value)) return kInf;
  return std::exp(log_value);
}

// log of sum_{l=0}^{k-1} r^{2l}.
double log_geometric(double r, Index k) {
  if (r == 0.0) return 0.0;
  const double lr = std::log(r);
  const double kk = static_cast<double>(k);
  if (r == 1.0) return std::log(kk);
  if (r < 1.0) return std::log(-std::expm1(2.0 * kk * lr)) - std::log(-std::expm1(2.0 * lr));
  return 2.0 * kk * lr + std::log(-std::expm1(-2.0 * kk * lr)) - std::log(std::expm1(2.0 * lr));
}

double log_sum_exp(const std::vector<double>& terms) {
  const double m = *std::max_element(terms.begin(), terms.end());
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double x : terms) s += std::exp(x - m);
  return m + std::log(s);
}

double truncation_n1(const BoundInputs& b, double t, double eps_abs, double power, double u0_norm) {
  const double x = eps_abs * t * b.a;
  if (x == 0.0 || u0_norm == 0.0) return 0.0;
  return from_log(t * (b.mu0 + eps_abs * b.a) + power * std::log(x) - std::lgamma(power + 1.0) +
                  std::log(u0_norm));
}

}  // namespace

BoundInputs make_bound_inputs(std::span<const double> coeff_norms, double mu0) {
  if (coeff_norms.empty()) throw std::invalid_argument("bound inputs: no coefficient norms");
  BoundInputs b;
  b.mu0 = mu0;
  double tail = 0.0;
  for (std::size_t l = 1; l < coeff_norms.size(); ++l) {
    tail += coeff_norms[l];
    b.a = std::max(b.a, coeff_norms[l]);
  }
  b.alpha = coeff_norms[0] + tail;
  b.beta = mu0 + tail;
  return b;
}

AprioriBounds apriori_bounds(const BoundInputs& b, double t, double eps_abs, int p, int degree,
                             double u0_norm) {
  if (p < 1) throw std::invalid_argument("apriori_bounds: p must be positive");
  if (t < 0.0) throw std::invalid_argument("apriori_bounds: t must be nonnegative");
  const Index k = 1 + static_cast<Index>(degree) * (p - 1);
  AprioriBounds out;

  if (t * b.alpha > 0.0 && u0_norm > 0.0) {
    const double pp = static_cast<double>(p);
    out.krylov = from_log(std::log(2.0) + 0.5 * log_geometric(eps_abs, k) + pp * std::log(t * b.alpha) +
                          t * std::max(1.0, b.beta) - std::lgamma(pp + 1.0) + std::log(u0_norm));
  }

  if (degree == 1) {
    out.truncation = truncation_n1(b, t, eps_abs, static_cast<double>(k), u0_norm);
  } else if (degree >= 2) {
    const double nn = static_cast<double>(degree);
    if (eps_abs == 0.0 || t * b.a == 0.0 || u0_norm == 0.0) {
      out.truncation = 0.0;
    } else if (k <= degree) {
      out.truncation = kInf;
    } else {
      const double e = std::numbers::e;
      const double c2 = std::pow(eps_abs, nn) * e * nn * t * b.a;
      const double sign = eps_abs > 1.0 ? 1.0 : (eps_abs < 1.0 ? -1.0 : 0.0);
      const double log_c1 =
          sign * std::log(eps_abs) + t * (b.mu0 + e * nn * b.a) + c2 - 1.0 + std::log(u0_norm);
      const double kk = std::floor(static_cast<double>(k) / nn);
      std::vector<double> terms;
      for (int l = 0; l < degree; ++l)
        terms.push_back((kk + l) * std::log(c2) - std::lgamma(kk + l));
      out.truncation = from_log(log_c1 + log_sum_exp(terms));
    }
  }
  out.total = out.krylov + out.truncation;
  return out;
}

template <ScalarField S>
SolverSetup<S> prepare(const MatrixPolynomial<S>& p, const Vector<S>& u0, const BuildOptions& options) {
  if (u0.size() != p.dim()) throw DimensionError("u0 length differs from A_l dimension");
  std::vector<double> norms;
  norms.reserve(p.coeffs().size());
  for (const auto& a : p.coeffs()) norms.push_back(two_norm_estimate(a, options.norm_tol));
  const double mu0 = log_norm(p.coeff(0), options.norm_tol);

  ScalingTransform scaling;
  if (options.use_scaling) scaling = ScalingTransform(options.gamma ? *options.gamma : heuristic_gamma(norms));
  double factor = 1.0;
  for (auto& nrm : norms) {
    nrm *= factor;
    factor /= scaling.gamma;
  }
  return SolverSetup<S>{apply_scaling(p, scaling), scaling, make_bound_inputs(norms, mu0), u0.norm(), u0};
}

template <ScalarField S>
ParameterizedSolution<S>::ParameterizedSolution(std::shared_ptr<const SolverSetup<S>> setup,
                                                std::shared_ptr<const KrylovDecomposition<S>> decomposition,
                                                int steps)
    : setup_(std::move(setup)), decomposition_(std::move(decomposition)), steps_(steps) {
  if (!setup_ || !decomposition_) throw std::invalid_argument("parameterized solution: null state");
  if (steps_ < 1 || steps_ > decomposition_->steps())
    throw std::out_of_range("parameterized solution: step count outside the decomposition");
}

template <ScalarField S>
bool ParameterizedSolution<S>::breakdown() const noexcept {
  return decomposition_->breakdown() && steps_ == decomposition_->steps();
}

template <ScalarField S>
ParameterizedSolution<S> ParameterizedSolution<S>::truncated(int steps) const {
  return ParameterizedSolution(setup_, decomposition_, steps);
}

template <ScalarField S>
Index ParameterizedSolution<S>::resolve_k(Index k) const {
  if (k == 0) return k_max();
  if (k < 1 || k > k_max()) throw std::out_of_range("coefficient count outside [1, k_max]");
  return k;
}

template <ScalarField S>
Vector<S> ParameterizedSolution<S>::scaled_stack(double t, Index k) const {
  const Index n = dim();
  const auto& dec = *decomposition_;
  const DenseMatrix<S> h = dec.hessenberg().topLeftCorner(steps_, steps_);
  const DenseMatrix<S> e = expm<S>(S(t) * h);
  const Vector<S> w = e.col(0) * S(dec.beta());
  return dec.basis().topLeftCorner(k * n, steps_) * w;
}

template <ScalarField S>
std::vector<Vector<S>> ParameterizedSolution<S>::coefficients(double t, Index k) const {
  k = resolve_k(k);
  const Index n = dim();
  const Vector<S> stack = scaled_stack(t, k);
  std::vector<Vector<S>> out;
  out.reserve(static_cast<std::size_t>(k));
  double factor = 1.0;
  for (Index l = 0; l < k; ++l) {
    out.emplace_back(stack.segment(l * n, n) * S(factor));
    factor *= gamma();
  }
  return out;
}

template <ScalarField S>
Vector<S> ParameterizedSolution<S>::evaluate(double t, S eps, Index k) const {
  k = resolve_k(k);
  const Index n = dim();
  const Vector<S> stack = scaled_stack(t, k);
  const S eps_hat = S(gamma()) * eps;
  Vector<S> acc = stack.segment((k - 1) * n, n);
  for (Index l = k - 2; l >= 0; --l) acc = eps_hat * acc + stack.segment(l * n, n);
  return acc;
}

template <ScalarField S>
AprioriBounds ParameterizedSolution<S>::apriori(double t, S eps) const {
  return apriori_bounds(setup_->bounds, t, gamma() * std::abs(eps), steps_, degree(), u0_norm());
}

template <ScalarField S>
double ParameterizedSolution<S>::aposteriori_krylov(double t, S eps) const {
  if (breakdown()) return 0.0;
  const auto& dec = *decomposition_;
  const Index n = dim();
  const int p = steps_;
  const double h_next = std::abs(dec.hessenberg()(p, p - 1));
  if (h_next == 0.0) return 0.0;

  const auto phi = phi_columns<S>(dec.hessenberg().topLeftCorner(p, p), t);
  const S phi1 = phi.phi1_col[p - 1];
  const S phi2 = phi.phi2_col[p - 1];

  const StructuredVector<S> q(n, dec.basis().col(p).head(n * dec.column_blocks(p)));
  const StructuredVector<S> lq = structured_matvec(setup_->working, q);

  const Index k = k_max();
  const S scale = S(h_next * dec.beta());
  const S eps_hat = S(gamma()) * eps;
  auto block = [&](Index l) -> Vector<S> {
    return scale * (phi1 * q.block(l) + phi2 * S(t) * lq.block(l));
  };
  Vector<S> acc = block(k - 1);
  for (Index l = k - 2; l >= 0; --l) acc = eps_hat * acc + block(l);
  return acc.norm();
}

template <ScalarField S>
ErrorReport<S> ParameterizedSolution<S>::error_report(double t, S eps) const {
  ErrorReport<S> r;
  r.t = t;
  r.eps = eps;
  const auto bounds = apriori(t, eps);
  r.apriori_krylov = bounds.krylov;
  r.apriori_truncation = bounds.truncation;
  r.apriori_total = bounds.total;
  r.aposteriori_krylov = aposteriori_krylov(t, eps);
  r.total_estimate = r.aposteriori_krylov;
  if (degree() == 1 && !breakdown())
    r.total_estimate += truncation_n1(setup_->bounds, t, gamma() * std::abs(eps), steps_, u0_norm());
  return r;
}

template <ScalarField S>
ParameterizedSolution<S> build(const MatrixPolynomial<S>& p, const Vector<S>& u0, int steps,
                               const BuildOptions& options) {
  auto setup = std::make_shared<const SolverSetup<S>>(prepare(p, u0, options));
  auto dec = std::make_shared<const KrylovDecomposition<S>>(run_arnoldi(setup->working, u0, steps));
  const int done = dec->steps();
  return ParameterizedSolution<S>(std::move(setup), std::move(dec), done);
}

template <ScalarField S>
AdaptiveResult<S> solve_adaptive(const MatrixPolynomial<S>& p, const Vector<S>& u0,
                                 std::span<const Target<S>> targets, const AdaptiveOptions& options) {
  if (targets.empty()) throw std::invalid_argument("solve_adaptive: no targets");
  if (!(options.tol > 0)) throw std::invalid_argument("solve_adaptive: tol must be positive");
  if (options.p_max < 1) throw std::invalid_argument("solve_adaptive: p_max must be positive");
  if (options.check_interval < 1) throw std::invalid_argument("solve_adaptive: check interval must be positive");

  auto setup = std::make_shared<const SolverSetup<S>>(prepare(p, u0, options.build));
  auto dec = std::make_shared<KrylovDecomposition<S>>(p.degree(), u0);
  for (int step = 1;; ++step) {
    const bool broke = dec->step(setup->working) == StepStatus::breakdown;
    if (!broke && step % options.check_interval != 0 && step < options.p_max) continue;

    ParameterizedSolution<S> solution(setup, dec, step);
    std::vector<ErrorReport<S>> reports;
    double worst = 0.0;
    for (const auto& target : targets) {
      reports.push_back(solution.error_report(target.t, target.eps));
      worst = std::max(worst, reports.back().total_estimate);
    }
    const bool converged = worst <= options.tol;
    if (converged || broke || step >= options.p_max)
      return AdaptiveResult<S>{std::move(solution), std::move(reports), converged};
  }
}

#define PARAMEXPMV_INSTANTIATE(S)                                                                  \
  template SolverSetup<S> prepare<S>(const MatrixPolynomial<S>&, const Vector<S>&, const BuildOptions&); \
  template class ParameterizedSolution<S>;                                                         \
  template ParameterizedSolution<S> build<S>(const MatrixPolynomial<S>&, const Vector<S>&, int,    \
                                             const BuildOptions&);                                 \
  template AdaptiveResult<S> solve_adaptive<S>(const MatrixPolynomial<S>&, const Vector<S>&,       \
                                               std::span<const Target<S>>, const AdaptiveOptions&);

PARAMEXPMV_INSTANTIATE(Real)
PARAMEXPMV_INSTANTIATE(Complex)

#undef PARAMEXPMV_INSTANTIATE

}  // namespace paramexpmv
