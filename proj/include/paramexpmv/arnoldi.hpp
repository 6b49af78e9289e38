#pragma once

#include "paramexpmv/toeplitz.hpp"

namespace paramexpmv {

enum class StepStatus { extended, breakdown };

inline constexpr double kBreakdownTol = 1e-14;

/// State of the infinite Arnoldi iteration for L_infinity started from
/// e_1 (x) u0.
///
/// After p steps without breakdown the basis is n(1+Np) x (p+1) and column l
/// (0-based) is zero below row n(1+lN). The Hessenberg matrix is (p+1) x p
/// with a nonnegative subdiagonal. On breakdown the last subdiagonal entry
/// is exactly zero and no new basis column is appended.
template <ScalarField S>
class KrylovDecomposition {
 public:
  /// Initial state: beta = ||u0||, q_1 = u0 / beta.
  KrylovDecomposition(int degree, const Vector<S>& u0);

  Index block_size() const noexcept { return n_; }
  int degree() const noexcept { return degree_; }
  int steps() const noexcept { return static_cast<int>(hessenberg_.cols()); }
  double beta() const noexcept { return beta_; }
  bool breakdown() const noexcept { return breakdown_; }

  const DenseMatrix<S>& basis() const noexcept { return basis_; }
  const DenseMatrix<S>& hessenberg() const noexcept { return hessenberg_; }

  /// Number of nonzero blocks of basis column `col` (0-based).
  Index column_blocks(int col) const noexcept { return 1 + static_cast<Index>(col) * degree_; }

  /// Scalars held by the basis.
  Index basis_storage() const noexcept { return basis_.size(); }

  /// One Arnoldi iteration: structured product of the last basis column,
  /// zero-padding of the earlier columns by nN rows, classical Gram-Schmidt
  /// applied twice, normalization.
  StepStatus step(const MatrixPolynomial<S>& p);

 private:
  Index n_;
  int degree_;
  double beta_;
  bool breakdown_ = false;
  DenseMatrix<S> basis_;
  DenseMatrix<S> hessenberg_;
};

template <ScalarField S>
StepStatus arnoldi_step(const MatrixPolynomial<S>& p, KrylovDecomposition<S>& k) {
  return k.step(p);
}

/// p steps, or fewer if the iteration breaks down.
template <ScalarField S>
KrylovDecomposition<S> run_arnoldi(const MatrixPolynomial<S>& p, const Vector<S>& u0, int steps);

}  // namespace paramexpmv
