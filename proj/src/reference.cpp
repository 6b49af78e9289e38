#include "paramexpmv/reference.hpp"

#include "paramexpmv/arnoldi.hpp"
#include "paramexpmv/matfun.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace paramexpmv {
namespace {

void check_cap(Index dim, Index cap, const char* what) {
  if (dim > cap)
    throw std::length_error(std::string(what) + ": dimension " + std::to_string(dim) +
                            " exceeds the dense cap " + std::to_string(cap));
}

}  // namespace

Index dense_cap() {
  if (const char* env = std::getenv("PARAMEXPMV_DENSE_CAP")) {
    try {
      return static_cast<Index>(std::stoll(env));
    } catch (const std::exception&) {
      throw std::invalid_argument("PARAMEXPMV_DENSE_CAP is not an integer");
    }
  }
  return 2000;
}

template <ScalarField S>
Vector<S> dense_solution(const MatrixPolynomial<S>& p, const Vector<S>& u0, double t, S eps, Index cap) {
  check_cap(p.dim(), cap, "dense_solution");
  if (u0.size() != p.dim()) throw DimensionError("dense_solution: u0 length mismatch");
  DenseMatrix<S> a = p.coeff(p.degree()).to_dense();
  for (int l = p.degree() - 1; l >= 0; --l) a = eps * a + p.coeff(l).to_dense();
  return expm<S>(S(t) * a) * u0;
}

template <ScalarField S>
std::vector<Vector<S>> dense_coefficients(const MatrixPolynomial<S>& p, const Vector<S>& u0, double t,
                                          Index m, Index cap) {
  const Index n = p.dim();
  check_cap(m * n, cap, "dense_coefficients");
  if (u0.size() != n) throw DimensionError("dense_coefficients: u0 length mismatch");
  const DenseMatrix<S> lm = assemble_Lm(p, m).to_dense();
  Vector<S> start = Vector<S>::Zero(m * n);
  start.head(n) = u0;
  const Vector<S> c = expm<S>(S(t) * lm) * start;
  std::vector<Vector<S>> blocks;
  for (Index l = 0; l < m; ++l) blocks.emplace_back(c.segment(l * n, n));
  return blocks;
}

template <ScalarField S>
ArnoldiReference<S> textbook_arnoldi(const SparseMatrix<S>& b, const Vector<S>& v0, int steps) {
  if (!b.square() || b.rows() != v0.size()) throw DimensionError("textbook_arnoldi: shape mismatch");
  const double beta = v0.norm();
  if (!(beta > 0)) throw std::invalid_argument("textbook_arnoldi: zero start vector");
  const DenseMatrix<S> dense = b.to_dense();
  const Index dim = b.rows();

  ArnoldiReference<S> r;
  r.basis = DenseMatrix<S>::Zero(dim, steps + 1);
  r.hessenberg = DenseMatrix<S>::Zero(steps + 1, steps);
  r.basis.col(0) = v0 / beta;
  for (int j = 0; j < steps; ++j) {
    Vector<S> w = dense * r.basis.col(j);
    const double wnorm = w.norm();
    for (int pass = 0; pass < 2; ++pass) {
      Vector<S> h = Vector<S>::Zero(j + 1);
      for (int i = 0; i <= j; ++i) h[i] = r.basis.col(i).dot(w);
      for (int i = 0; i <= j; ++i) w -= h[i] * r.basis.col(i);
      r.hessenberg.col(j).head(j + 1) += h;
    }
    const double alpha = w.norm();
    if (alpha <= kBreakdownTol * wnorm) {
      r.breakdown = true;
      r.hessenberg.conservativeResize(j + 2, j + 1);
      r.basis.conservativeResize(dim, j + 1);
      return r;
    }
    r.hessenberg(j + 1, j) = S(alpha);
    r.basis.col(j + 1) = w / alpha;
  }
  return r;
}

#define PARAMEXPMV_INSTANTIATE(S)                                                                  \
  template Vector<S> dense_solution<S>(const MatrixPolynomial<S>&, const Vector<S>&, double, S, Index); \
  template std::vector<Vector<S>> dense_coefficients<S>(const MatrixPolynomial<S>&, const Vector<S>&,  \
                                                        double, Index, Index);                         \
  template ArnoldiReference<S> textbook_arnoldi<S>(const SparseMatrix<S>&, const Vector<S>&, int);

PARAMEXPMV_INSTANTIATE(Real)
PARAMEXPMV_INSTANTIATE(Complex)

#undef PARAMEXPMV_INSTANTIATE

}  // namespace paramexpmv
