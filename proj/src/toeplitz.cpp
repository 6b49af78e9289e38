#include "paramexpmv/toeplitz.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace paramexpmv {

template <ScalarField S>
MatrixPolynomial<S>::MatrixPolynomial(std::vector<SparseMatrix<S>> coeffs)
    : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) throw DimensionError("matrix polynomial needs at least A_0");
  const Index n = coeffs_.front().rows();
  for (std::size_t l = 0; l < coeffs_.size(); ++l) {
    if (coeffs_[l].rows() != n || coeffs_[l].cols() != n) {
      std::ostringstream msg;
      msg << "coefficient A_" << l << " is " << coeffs_[l].rows() << "x" << coeffs_[l].cols()
          << ", expected " << n << "x" << n;
      throw DimensionError(msg.str());
    }
  }
}

template <ScalarField S>
SparseMatrix<S> MatrixPolynomial<S>::evaluate(S eps) const {
  SparseMatrix<S> acc = coeffs_.back();
  for (int l = degree() - 1; l >= 0; --l) acc = add(coeffs_[static_cast<std::size_t>(l)], acc, eps);
  return acc;
}

template <ScalarField S>
Vector<S> MatrixPolynomial<S>::apply(S eps, const Vector<S>& x) const {
  Vector<S> acc = spmv(coeffs_.back(), x);
  for (int l = degree() - 1; l >= 0; --l)
    acc = eps * acc + spmv(coeffs_[static_cast<std::size_t>(l)], x);
  return acc;
}

MatrixPolynomial<Complex> to_complex(const MatrixPolynomial<Real>& p) {
  std::vector<SparseMatrix<Complex>> c;
  for (const auto& a : p.coeffs()) c.push_back(to_complex(a));
  return MatrixPolynomial<Complex>(std::move(c));
}

template <ScalarField S>
StructuredVector<S>::StructuredVector(Index block_size, Vector<S> prefix)
    : block_size_(block_size), prefix_(std::move(prefix)) {
  if (block_size_ <= 0) throw DimensionError("structured vector: block size must be positive");
  if (prefix_.size() % block_size_ != 0)
    throw DimensionError("structured vector: prefix length is not a multiple of the block size");
}

template <ScalarField S>
Vector<S> StructuredVector<S>::materialize(Index m) const {
  Vector<S> out = Vector<S>::Zero(m * block_size_);
  const Index len = std::min(out.size(), prefix_.size());
  out.head(len) = prefix_.head(len);
  return out;
}

template <ScalarField S>
SparseMatrix<S> assemble_Lm(const MatrixPolynomial<S>& p, Index m, Index cap) {
  if (m < 1) throw std::invalid_argument("assemble_Lm: m must be at least 1");
  const Index n = p.dim();
  if (m * n > cap) {
    std::ostringstream msg;
    msg << "assemble_Lm: dimension " << m * n << " exceeds cap " << cap;
    throw std::length_error(msg.str());
  }
  const int nhat = static_cast<int>(std::min<Index>(m - 1, p.degree()));
  std::vector<Triplet<S>> t;
  for (int l = 0; l <= nhat; ++l) {
    const auto entries = p.coeff(l).triplets();
    for (Index bj = 0; bj + l < m; ++bj) {
      const Index bi = bj + l;
      for (const auto& e : entries) t.push_back({bi * n + e.row, bj * n + e.col, e.value});
    }
  }
  return SparseMatrix<S>::from_triplets(m * n, m * n, std::move(t));
}

template <ScalarField S>
StructuredVector<S> structured_matvec(const MatrixPolynomial<S>& p, const StructuredVector<S>& x) {
  const Index n = p.dim();
  if (x.block_size() != n) throw DimensionError("structured_matvec: block size differs from A_l dimension");
  const Index j = x.num_blocks();
  if (j < 1) throw DimensionError("structured_matvec: x has no nonzero blocks");
  const Index big_n = p.degree();
  StructuredVector<S> y(n, Vector<S>::Zero((j + big_n) * n));
  // Blocks are 1-based in the formula; l below is 0-based (l = ell - 1).
  for (Index l = 0; l < j + big_n; ++l) {
    auto yl = y.block(l);
    std::span<S> out(yl.data(), static_cast<std::size_t>(n));
    const Index lo = std::max<Index>(0, l + 1 - j);
    const Index hi = std::min<Index>(big_n, l);
    for (Index i = lo; i <= hi; ++i) {
      const auto xb = x.block(l - i);
      spmv_add<S>(p.coeff(static_cast<int>(i)), std::span<const S>(xb.data(), static_cast<std::size_t>(n)), out);
    }
  }
  return y;
}

ScalingTransform::ScalingTransform(double g) : gamma(g) {
  if (!(g > 0) || !std::isfinite(g)) throw std::invalid_argument("scaling gamma must be finite and positive");
}

double heuristic_gamma(std::span<const double> coeff_norms) {
  double gamma = 0.0;
  for (std::size_t l = 1; l < coeff_norms.size(); ++l)
    gamma = std::max(gamma, std::pow(coeff_norms[l], 1.0 / static_cast<double>(l)));
  return gamma > 0.0 ? gamma : 1.0;
}

template <ScalarField S>
double heuristic_gamma(const MatrixPolynomial<S>& p, double tol) {
  std::vector<double> norms(p.coeffs().size(), 0.0);
  for (int l = 1; l <= p.degree(); ++l) norms[static_cast<std::size_t>(l)] = two_norm_estimate(p.coeff(l), tol);
  return heuristic_gamma(norms);
}

template <ScalarField S>
MatrixPolynomial<S> apply_scaling(const MatrixPolynomial<S>& p, ScalingTransform s) {
  std::vector<SparseMatrix<S>> c;
  c.reserve(p.coeffs().size());
  double factor = 1.0;
  for (const auto& a : p.coeffs()) {
    c.push_back(a.scaled(S(factor)));
    factor /= s.gamma;
  }
  return MatrixPolynomial<S>(std::move(c));
}

#define PARAMEXPMV_INSTANTIATE(S)                                                              \
  template class MatrixPolynomial<S>;                                                          \
  template class StructuredVector<S>;                                                          \
  template SparseMatrix<S> assemble_Lm<S>(const MatrixPolynomial<S>&, Index, Index);           \
  template StructuredVector<S> structured_matvec<S>(const MatrixPolynomial<S>&,                \
                                                    const StructuredVector<S>&);               \
  template double heuristic_gamma<S>(const MatrixPolynomial<S>&, double);                      \
  template MatrixPolynomial<S> apply_scaling<S>(const MatrixPolynomial<S>&, ScalingTransform);

PARAMEXPMV_INSTANTIATE(Real)
PARAMEXPMV_INSTANTIATE(Complex)

#undef PARAMEXPMV_INSTANTIATE

}  // namespace paramexpmv
