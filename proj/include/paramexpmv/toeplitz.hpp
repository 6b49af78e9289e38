#pragma once

#include "paramexpmv/linalg.hpp"

#include <vector>

namespace paramexpmv {

/// A(eps) = A_0 + eps A_1 + ... + eps^N A_N with square n x n coefficients.
template <ScalarField S>
class MatrixPolynomial {
 public:
  explicit MatrixPolynomial(std::vector<SparseMatrix<S>> coeffs);

  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  Index dim() const noexcept { return coeffs_.front().rows(); }
  const SparseMatrix<S>& coeff(int l) const { return coeffs_.at(static_cast<std::size_t>(l)); }
  std::span<const SparseMatrix<S>> coeffs() const noexcept { return coeffs_; }

  SparseMatrix<S> evaluate(S eps) const;
  /// A(eps) x by Horner's rule, without forming A(eps).
  Vector<S> apply(S eps, const Vector<S>& x) const;

 private:
  std::vector<SparseMatrix<S>> coeffs_;
};

MatrixPolynomial<Complex> to_complex(const MatrixPolynomial<Real>& p);

/// vec(x_1, ..., x_j, 0, 0, ...): the stored prefix holds j blocks of length
/// n, everything after it is zero.
template <ScalarField S>
class StructuredVector {
 public:
  StructuredVector(Index block_size, Vector<S> prefix);

  Index block_size() const noexcept { return block_size_; }
  Index num_blocks() const noexcept { return prefix_.size() / block_size_; }
  const Vector<S>& prefix() const noexcept { return prefix_; }

  auto block(Index i) const { return prefix_.segment(i * block_size_, block_size_); }
  auto block(Index i) { return prefix_.segment(i * block_size_, block_size_); }

  /// The first m blocks, zero-padded or truncated as needed.
  Vector<S> materialize(Index m) const;

 private:
  Index block_size_;
  Vector<S> prefix_;
};

inline constexpr Index kDefaultAssembleCap = 200000;

/// The mn x mn lower block-triangular block-Toeplitz matrix with block (i, j)
/// equal to A_{i-j} for 0 <= i-j <= min(m-1, N).
template <ScalarField S>
SparseMatrix<S> assemble_Lm(const MatrixPolynomial<S>& p, Index m,
                            Index cap = kDefaultAssembleCap);

/// L x for the infinite operator: y has j+N blocks,
/// y_l = sum_{i=max(0,l-j)}^{min(N,l-1)} A_i x_{l-i} (1-based l).
template <ScalarField S>
StructuredVector<S> structured_matvec(const MatrixPolynomial<S>& p, const StructuredVector<S>& x);

struct ScalingTransform {
  double gamma = 1.0;

  ScalingTransform() = default;
  explicit ScalingTransform(double g);
};

/// max over l >= 1 of ||A_l||^(1/l), or 1 if every A_l (l >= 1) vanishes.
template <ScalarField S>
double heuristic_gamma(const MatrixPolynomial<S>& p, double tol = kDefaultNormTol);
double heuristic_gamma(std::span<const double> coeff_norms);

/// Coefficients gamma^-l A_l, so that the scaled polynomial at gamma*eps
/// equals A(eps).
template <ScalarField S>
MatrixPolynomial<S> apply_scaling(const MatrixPolynomial<S>& p, ScalingTransform s);

}  // namespace paramexpmv
