#pragma once

#include <Eigen/Dense>

#include <complex>
#include <concepts>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace paramexpmv {

using Index = Eigen::Index;
using Real = double;
using Complex = std::complex<double>;

template <typename S>
concept ScalarField = std::same_as<S, Real> || std::same_as<S, Complex>;

template <typename S>
using Vector = Eigen::Matrix<S, Eigen::Dynamic, 1>;

/// Column-major dense storage, used for projected Hessenberg matrices and
/// the Krylov basis.
template <typename S>
using DenseMatrix = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor>;

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when an iterative estimator hits its iteration cap.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, int iterations, double last_estimate)
      : std::runtime_error(what), iterations_(iterations), last_estimate_(last_estimate) {}

  int iterations() const noexcept { return iterations_; }
  double last_estimate() const noexcept { return last_estimate_; }

 private:
  int iterations_;
  double last_estimate_;
};

template <typename S>
struct Triplet {
  Index row;
  Index col;
  S value;
};

/// Compressed sparse row matrix. Column indices are strictly increasing within
/// each row; duplicate triplets are summed at construction.
template <ScalarField S>
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(Index rows, Index cols);

  static SparseMatrix from_triplets(Index rows, Index cols, std::vector<Triplet<S>> triplets);
  static SparseMatrix from_dense(const DenseMatrix<S>& dense);
  static SparseMatrix identity(Index n);

  Index rows() const noexcept { return rows_; }
  Index cols() const noexcept { return cols_; }
  Index nnz() const noexcept { return static_cast<Index>(values_.size()); }
  bool square() const noexcept { return rows_ == cols_; }

  std::span<const Index> row_ptr() const noexcept { return row_ptr_; }
  std::span<const Index> col_idx() const noexcept { return col_idx_; }
  std::span<const S> values() const noexcept { return values_; }

  /// Stored value at (i, j), or zero.
  S coeff(Index i, Index j) const;

  std::vector<Triplet<S>> triplets() const;
  DenseMatrix<S> to_dense() const;
  SparseMatrix scaled(S factor) const;
  SparseMatrix adjoint() const;

  friend bool operator==(const SparseMatrix&, const SparseMatrix&) = default;

 private:
  Index rows_ = 0;
  Index cols_ = 0;
  std::vector<Index> row_ptr_{0};
  std::vector<Index> col_idx_;
  std::vector<S> values_;
};

/// y += A x over contiguous storage.
template <ScalarField S>
void spmv_add(const SparseMatrix<S>& a, std::span<const S> x, std::span<S> y);

template <ScalarField S>
Vector<S> spmv(const SparseMatrix<S>& a, const Vector<S>& x);

/// y = A^H x
template <ScalarField S>
Vector<S> spmv_adjoint(const SparseMatrix<S>& a, const Vector<S>& x);

/// a + factor * b; the sparsity pattern is the union of both patterns.
template <ScalarField S>
SparseMatrix<S> add(const SparseMatrix<S>& a, const SparseMatrix<S>& b, S factor = S(1));

SparseMatrix<Complex> to_complex(const SparseMatrix<Real>& a);
Vector<Complex> to_complex(const Vector<Real>& v);

inline constexpr double kDefaultNormTol = 1e-8;

/// Spectral norm. Exact (dense Hermitian eigensolve of the small Gram
/// matrix) when min(rows, cols) <= 64; otherwise Lanczos on A^H A with full
/// reorthogonalization, stopped once the Ritz residual certifies `tol`
/// relative accuracy.
template <ScalarField S>
double two_norm_estimate(const SparseMatrix<S>& a, double tol = kDefaultNormTol);

/// Logarithmic 2-norm mu(A) = lambda_max((A + A^H) / 2). Dense eigensolve for
/// n <= 64, Lanczos otherwise, accurate to tol * (||A|| + 1).
template <ScalarField S>
double log_norm(const SparseMatrix<S>& a, double tol = kDefaultNormTol);

}  // namespace paramexpmv
