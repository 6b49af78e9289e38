#include "paramexpmv/linalg.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace paramexpmv {

template <ScalarField S>
SparseMatrix<S>::SparseMatrix(Index rows, Index cols)
    : rows_(rows), cols_(cols), row_ptr_(static_cast<std::size_t>(rows) + 1, 0) {
  if (rows < 0 || cols < 0) throw DimensionError("negative matrix dimension");
}

template <ScalarField S>
SparseMatrix<S> SparseMatrix<S>::from_triplets(Index rows, Index cols,
                                               std::vector<Triplet<S>> triplets) {
  SparseMatrix m(rows, cols);
  for (const auto& t : triplets) {
    if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols) {
      std::ostringstream msg;
      msg << "triplet (" << t.row << ", " << t.col << ") outside " << rows << "x" << cols;
      throw DimensionError(msg.str());
    }
  }
  std::stable_sort(triplets.begin(), triplets.end(), [](const auto& x, const auto& y) {
    return x.row != y.row ? x.row < y.row : x.col < y.col;
  });
  m.col_idx_.reserve(triplets.size());
  m.values_.reserve(triplets.size());
  for (std::size_t k = 0; k < triplets.size();) {
    const auto& head = triplets[k];
    S sum = head.value;
    std::size_t next = k + 1;
    while (next < triplets.size() && triplets[next].row == head.row &&
           triplets[next].col == head.col) {
      sum += triplets[next].value;
      ++next;
    }
    m.col_idx_.push_back(head.col);
    m.values_.push_back(sum);
    ++m.row_ptr_[static_cast<std::size_t>(head.row) + 1];
    k = next;
  }
  for (Index i = 0; i < rows; ++i) m.row_ptr_[i + 1] += m.row_ptr_[i];
  return m;
}

template <ScalarField S>
SparseMatrix<S> SparseMatrix<S>::from_dense(const DenseMatrix<S>& dense) {
  std::vector<Triplet<S>> triplets;
  for (Index i = 0; i < dense.rows(); ++i)
    for (Index j = 0; j < dense.cols(); ++j)
      if (dense(i, j) != S(0)) triplets.push_back({i, j, dense(i, j)});
  return from_triplets(dense.rows(), dense.cols(), std::move(triplets));
}

template <ScalarField S>
SparseMatrix<S> SparseMatrix<S>::identity(Index n) {
  std::vector<Triplet<S>> triplets;
  triplets.reserve(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) triplets.push_back({i, i, S(1)});
  return from_triplets(n, n, std::move(triplets));
}

template <ScalarField S>
S SparseMatrix<S>::coeff(Index i, Index j) const {
  const auto first = col_idx_.begin() + row_ptr_[i];
  const auto last = col_idx_.begin() + row_ptr_[i + 1];
  const auto it = std::lower_bound(first, last, j);
  if (it == last || *it != j) return S(0);
  return values_[static_cast<std::size_t>(it - col_idx_.begin())];
}

template <ScalarField S>
std::vector<Triplet<S>> SparseMatrix<S>::triplets() const {
  std::vector<Triplet<S>> out;
  out.reserve(values_.size());
  for (Index i = 0; i < rows_; ++i)
    for (Index k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) out.push_back({i, col_idx_[k], values_[k]});
  return out;
}

template <ScalarField S>
DenseMatrix<S> SparseMatrix<S>::to_dense() const {
  DenseMatrix<S> d = DenseMatrix<S>::Zero(rows_, cols_);
  for (Index i = 0; i < rows_; ++i)
    for (Index k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) d(i, col_idx_[k]) = values_[k];
  return d;
}

template <ScalarField S>
SparseMatrix<S> SparseMatrix<S>::scaled(S factor) const {
  SparseMatrix out = *this;
  for (auto& v : out.values_) v *= factor;
  return out;
}

template <ScalarField S>
SparseMatrix<S> SparseMatrix<S>::adjoint() const {
  std::vector<Triplet<S>> t;
  t.reserve(values_.size());
  for (Index i = 0; i < rows_; ++i)
    for (Index k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      if constexpr (std::same_as<S, Complex>)
        t.push_back({col_idx_[k], i, std::conj(values_[k])});
      else
        t.push_back({col_idx_[k], i, values_[k]});
    }
  return from_triplets(cols_, rows_, std::move(t));
}

template <ScalarField S>
void spmv_add(const SparseMatrix<S>& a, std::span<const S> x, std::span<S> y) {
  if (static_cast<Index>(x.size()) != a.cols() || static_cast<Index>(y.size()) != a.rows())
    throw DimensionError("spmv: operand length does not match matrix shape");
  const auto rp = a.row_ptr();
  const auto ci = a.col_idx();
  const auto val = a.values();
  for (Index i = 0; i < a.rows(); ++i) {
    S acc(0);
    for (Index k = rp[i]; k < rp[i + 1]; ++k) acc += val[k] * x[ci[k]];
    y[i] += acc;
  }
}

template <ScalarField S>
Vector<S> spmv(const SparseMatrix<S>& a, const Vector<S>& x) {
  if (x.size() != a.cols()) throw DimensionError("spmv: x.length != A.n_cols");
  Vector<S> y = Vector<S>::Zero(a.rows());
  spmv_add<S>(a, std::span<const S>(x.data(), x.size()), std::span<S>(y.data(), y.size()));
  return y;
}

template <ScalarField S>
Vector<S> spmv_adjoint(const SparseMatrix<S>& a, const Vector<S>& x) {
  if (x.size() != a.rows()) throw DimensionError("spmv_adjoint: x.length != A.n_rows");
  Vector<S> y = Vector<S>::Zero(a.cols());
  const auto rp = a.row_ptr();
  const auto ci = a.col_idx();
  const auto val = a.values();
  for (Index i = 0; i < a.rows(); ++i)
    for (Index k = rp[i]; k < rp[i + 1]; ++k) {
      if constexpr (std::same_as<S, Complex>)
        y[ci[k]] += std::conj(val[k]) * x[i];
      else
        y[ci[k]] += val[k] * x[i];
    }
  return y;
}

template <ScalarField S>
SparseMatrix<S> add(const SparseMatrix<S>& a, const SparseMatrix<S>& b, S factor) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("add: shape mismatch");
  auto t = a.triplets();
  for (auto tb : b.triplets()) {
    tb.value *= factor;
    t.push_back(tb);
  }
  return SparseMatrix<S>::from_triplets(a.rows(), a.cols(), std::move(t));
}

SparseMatrix<Complex> to_complex(const SparseMatrix<Real>& a) {
  std::vector<Triplet<Complex>> t;
  for (const auto& e : a.triplets()) t.push_back({e.row, e.col, Complex(e.value, 0.0)});
  return SparseMatrix<Complex>::from_triplets(a.rows(), a.cols(), std::move(t));
}

Vector<Complex> to_complex(const Vector<Real>& v) { return v.cast<Complex>(); }

namespace {

template <ScalarField S>
Vector<S> random_unit_vector(Index n) {
  std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
  std::normal_distribution<double> normal;
  Vector<S> v(n);
  for (Index i = 0; i < n; ++i) {
    if constexpr (std::same_as<S, Complex>)
      v[i] = Complex(normal(rng), normal(rng));
    else
      v[i] = normal(rng);
  }
  return v / v.norm();
}

// Largest eigenvalue of a Hermitian operator. Lanczos with full
// reorthogonalization; `done(theta, residual, spread)` decides termination,
// where `residual` bounds the distance from theta to the spectrum.
template <ScalarField S, typename Apply, typename Done>
double lanczos_max_eigenvalue(Index n, int max_iter, Apply&& apply, Done&& done,
                              const char* what) {
  if (n == 0) return 0.0;
  std::vector<Vector<S>> basis;
  std::vector<double> diag;
  std::vector<double> offdiag;
  basis.push_back(random_unit_vector<S>(n));
  double theta = 0.0;

  for (int k = 0;; ++k) {
    const Vector<S>& v = basis.back();
    Vector<S> w = apply(v);
    const double a = std::real(v.dot(w));
    diag.push_back(a);
    w -= a * v;
    if (k > 0) w -= offdiag.back() * basis[basis.size() - 2];
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& q : basis) w -= q.dot(w) * q;
    const double b = w.norm();

    const Index m = static_cast<Index>(diag.size());
    const bool last = m == n || k + 1 >= max_iter;
    if (m < 50 || m % 5 == 0 || last || b == 0.0) {
      Eigen::VectorXd d = Eigen::Map<const Eigen::VectorXd>(diag.data(), m);
      Eigen::VectorXd e = Eigen::VectorXd::Zero(std::max<Index>(m - 1, 0));
      for (Index i = 0; i + 1 < m; ++i) e[i] = offdiag[static_cast<std::size_t>(i)];
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
      tri.computeFromTridiagonal(d, e, Eigen::ComputeEigenvectors);
      const Eigen::VectorXd& ritz = tri.eigenvalues();
      Index top = 0;
      ritz.maxCoeff(&top);
      theta = ritz[top];
      const double residual = b * std::abs(tri.eigenvectors()(m - 1, top));
      const double spread = ritz.cwiseAbs().maxCoeff();
      if (m == n || b <= 1e-14 * spread || done(theta, residual, spread)) return theta;
    }
    if (k + 1 >= max_iter) {
      std::ostringstream msg;
      msg << what << ": no convergence after " << max_iter << " iterations (last estimate "
          << theta << ")";
      throw ConvergenceError(msg.str(), max_iter, theta);
    }
    offdiag.push_back(b);
    basis.push_back(w / b);
  }
}

template <ScalarField S>
Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic> gram_of_narrow(const SparseMatrix<S>& a) {
  // a has few columns: G = A^H A accumulated row by row.
  using M = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
  M g = M::Zero(a.cols(), a.cols());
  const auto rp = a.row_ptr();
  const auto ci = a.col_idx();
  const auto val = a.values();
  for (Index i = 0; i < a.rows(); ++i)
    for (Index p = rp[i]; p < rp[i + 1]; ++p)
      for (Index q = rp[i]; q < rp[i + 1]; ++q) {
        if constexpr (std::same_as<S, Complex>)
          g(ci[p], ci[q]) += std::conj(val[p]) * val[q];
        else
          g(ci[p], ci[q]) += val[p] * val[q];
      }
  return g;
}

}  // namespace

template <ScalarField S>
double two_norm_estimate(const SparseMatrix<S>& a, double tol) {
  if (!(tol > 0)) throw std::invalid_argument("two_norm_estimate: tol must be positive");
  if (a.nnz() == 0) return 0.0;
  if (std::min(a.rows(), a.cols()) <= 64) {
    const auto g = a.cols() <= a.rows() ? gram_of_narrow(a) : gram_of_narrow(a.adjoint());
    Eigen::SelfAdjointEigenSolver<std::decay_t<decltype(g)>> eig(g, Eigen::EigenvaluesOnly);
    return std::sqrt(std::max(0.0, eig.eigenvalues().maxCoeff()));
  }
  const auto adj = a.adjoint();
  const double lambda = lanczos_max_eigenvalue<S>(
      a.cols(), static_cast<int>(10 * a.cols()),
      [&](const Vector<S>& x) { return spmv(adj, spmv(a, x)); },
      [&](double theta, double residual, double) { return residual <= tol * theta; },
      "two_norm_estimate");
  return std::sqrt(std::max(0.0, lambda));
}

template <ScalarField S>
double log_norm(const SparseMatrix<S>& a, double tol) {
  if (!a.square()) throw DimensionError("log_norm: matrix must be square");
  if (!(tol > 0)) throw std::invalid_argument("log_norm: tol must be positive");
  if (a.rows() == 0) return 0.0;
  if (a.rows() <= 64) {
    const DenseMatrix<S> d = a.to_dense();
    const DenseMatrix<S> h = (d + d.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<DenseMatrix<S>> eig(h, Eigen::EigenvaluesOnly);
    return eig.eigenvalues().maxCoeff();
  }
  const auto adj = a.adjoint();
  return lanczos_max_eigenvalue<S>(
      a.rows(), static_cast<int>(10 * a.rows()),
      [&](const Vector<S>& x) -> Vector<S> { return (spmv(a, x) + spmv(adj, x)) / 2.0; },
      [&](double, double residual, double spread) { return residual <= tol * (spread + 1.0); },
      "log_norm");
}

#define PARAMEXPMV_INSTANTIATE(S)                                                         \
  template class SparseMatrix<S>;                                                         \
  template void spmv_add<S>(const SparseMatrix<S>&, std::span<const S>, std::span<S>);   \
  template Vector<S> spmv<S>(const SparseMatrix<S>&, const Vector<S>&);                   \
  template Vector<S> spmv_adjoint<S>(const SparseMatrix<S>&, const Vector<S>&);           \
  template SparseMatrix<S> add<S>(const SparseMatrix<S>&, const SparseMatrix<S>&, S);     \
  template double two_norm_estimate<S>(const SparseMatrix<S>&, double);                   \
  template double log_norm<S>(const SparseMatrix<S>&, double);

PARAMEXPMV_INSTANTIATE(Real)
PARAMEXPMV_INSTANTIATE(Complex)

#undef PARAMEXPMV_INSTANTIATE

}  // namespace paramexpmv
