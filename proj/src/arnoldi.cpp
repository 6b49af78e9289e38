#include "paramexpmv/arnoldi.hpp"

#include <cmath>
#include <stdexcept>

namespace paramexpmv {

template <ScalarField S>
KrylovDecomposition<S>::KrylovDecomposition(int degree, const Vector<S>& u0)
    : n_(u0.size()), degree_(degree), beta_(u0.norm()), hessenberg_(1, 0) {
  if (degree < 0) throw std::invalid_argument("arnoldi: negative degree");
  if (n_ == 0) throw DimensionError("arnoldi: empty initial vector");
  if (!(beta_ > 0.0)) throw std::invalid_argument("arnoldi: initial vector is zero");
  if (!std::isfinite(beta_)) throw std::invalid_argument("arnoldi: initial vector is not finite");
  basis_ = u0 / beta_;
}

template <ScalarField S>
StepStatus KrylovDecomposition<S>::step(const MatrixPolynomial<S>& p) {
  if (breakdown_) throw std::logic_error("arnoldi: step after breakdown");
  if (p.dim() != n_ || p.degree() != degree_)
    throw DimensionError("arnoldi: polynomial does not match the decomposition");

  const int s = steps();
  const Index cols = s + 1;
  const Index old_rows = basis_.rows();
  const Index new_rows = n_ * column_blocks(s + 1);

  const StructuredVector<S> x(n_, basis_.col(s).head(n_ * column_blocks(s)));
  Vector<S> y = structured_matvec(p, x).prefix();
  const double ynorm = y.norm();

  basis_.conservativeResize(new_rows, cols);
  basis_.bottomRows(new_rows - old_rows).setZero();

  Vector<S> h = basis_.adjoint() * y;
  y.noalias() -= basis_ * h;
  const Vector<S> h2 = basis_.adjoint() * y;
  y.noalias() -= basis_ * h2;
  h += h2;
  const double alpha = y.norm();

  hessenberg_.conservativeResize(s + 2, s + 1);
  hessenberg_.row(s + 1).setZero();
  hessenberg_.col(s).head(s + 1) = h;

  if (alpha <= kBreakdownTol * ynorm) {
    hessenberg_(s + 1, s) = S(0);
    basis_.conservativeResize(old_rows, cols);
    breakdown_ = true;
    return StepStatus::breakdown;
  }
  hessenberg_(s + 1, s) = S(alpha);
  basis_.conservativeResize(new_rows, cols + 1);
  basis_.col(cols) = y / alpha;
  return StepStatus::extended;
}

template <ScalarField S>
KrylovDecomposition<S> run_arnoldi(const MatrixPolynomial<S>& p, const Vector<S>& u0, int steps) {
  if (steps < 1) throw std::invalid_argument("run_arnoldi: need at least one step");
  if (u0.size() != p.dim()) throw DimensionError("run_arnoldi: u0 length differs from A_l dimension");
  KrylovDecomposition<S> k(p.degree(), u0);
  for (int l = 0; l < steps; ++l)
    if (k.step(p) == StepStatus::breakdown) break;
  return k;
}

template class KrylovDecomposition<Real>;
template class KrylovDecomposition<Complex>;
template KrylovDecomposition<Real> run_arnoldi<Real>(const MatrixPolynomial<Real>&, const Vector<Real>&, int);
template KrylovDecomposition<Complex> run_arnoldi<Complex>(const MatrixPolynomial<Complex>&,
                                                           const Vector<Complex>&, int);

}  // namespace paramexpmv
