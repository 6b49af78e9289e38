#include "doctest.h"

#include "paramexpmv/arnoldi.hpp"
#include "paramexpmv/problems.hpp"
#include "paramexpmv/reference.hpp"
#include "test_util.hpp"

using namespace paramexpmv;
using namespace paramexpmv::testing;

namespace {

template <ScalarField S>
double orthonormality_defect(const DenseMatrix<S>& q) {
  return max_abs(DenseMatrix<S>(q.adjoint() * q) - DenseMatrix<S>::Identity(q.cols(), q.cols()));
}

// max_l ||L q_l - Q_{p+1} h_l|| / ||L||, with L applied structurally.
template <ScalarField S>
double arnoldi_residual(const MatrixPolynomial<S>& p, const KrylovDecomposition<S>& k) {
  const Index n = k.block_size();
  double norm_l = 0.0;
  for (const auto& a : p.coeffs()) norm_l += two_norm_estimate(a);
  double worst = 0.0;
  for (int l = 0; l < k.steps(); ++l) {
    const Index rows = n * k.column_blocks(l);
    const auto y = structured_matvec(p, StructuredVector<S>(n, k.basis().col(l).head(rows)));
    const Index cols = std::min<Index>(k.basis().cols(), l + 2);
    Vector<S> r = -k.basis().leftCols(cols) * k.hessenberg().col(l).head(cols);
    r.head(y.prefix().size()) += y.prefix();
    worst = std::max(worst, r.norm());
  }
  return worst / std::max(norm_l, 1e-300);
}

}  // namespace

TEST_CASE("breakdown when u0 is an eigenvector") {
  const MatrixPolynomial<Real> p({SparseMatrix<Real>::from_triplets(2, 2, {{0, 0, 1.0}, {1, 1, 2.0}})});
  KrylovDecomposition<Real> k(0, Vector<Real>{{1.0, 0.0}});
  CHECK(k.step(p) == StepStatus::breakdown);
  CHECK(k.breakdown());
  CHECK(k.steps() == 1);
  CHECK(k.hessenberg()(0, 0) == doctest::Approx(1.0));
  CHECK(k.hessenberg()(1, 0) == 0.0);
  CHECK(k.basis().cols() == 1);
  CHECK_THROWS_AS(k.step(p), std::logic_error);

  const auto r = run_arnoldi(p, Vector<Real>{{1.0, 0.0}}, 5);
  CHECK(r.breakdown());
  CHECK(r.steps() == 1);
}

TEST_CASE("scalar shift gives a Jordan-like Hessenberg matrix") {
  const auto k = run_arnoldi(scalar_shift(), Vector<Real>{{1.0}}, 8);
  REQUIRE(k.steps() == 8);
  const DenseMatrix<Real>& h = k.hessenberg();
  for (Index i = 0; i < 9; ++i)
    for (Index j = 0; j < 8; ++j) CHECK(std::abs(h(i, j) - (i == j + 1 ? 1.0 : 0.0)) <= 1e-15);
  CHECK(max_abs(k.basis() - DenseMatrix<Real>::Identity(9, 9)) <= 1e-15);
}

TEST_CASE("first step and zero start") {
  std::mt19937_64 rng(3);
  const auto p = random_polynomial<Real>(4, 2, rng);
  const auto u0 = random_vector<Real>(4, rng);
  KrylovDecomposition<Real> k(2, u0);
  CHECK(k.beta() == doctest::Approx(u0.norm()));
  CHECK(max_abs(k.basis().col(0) - u0 / u0.norm()) <= 1e-16);
  k.step(p);
  CHECK(k.hessenberg().rows() == 2);
  CHECK(k.hessenberg().cols() == 1);
  CHECK_THROWS_AS(KrylovDecomposition<Real>(1, Vector<Real>::Zero(4)), std::invalid_argument);
  CHECK_THROWS_AS(run_arnoldi(p, Vector<Real>(Vector<Real>::Zero(4)), 3), std::invalid_argument);
}

TEST_CASE_TEMPLATE("equivalence with textbook Arnoldi on the assembled matrix", S, Real, Complex) {
  std::mt19937_64 rng(41);
  std::uniform_int_distribution<int> nd(1, 8), deg(1, 3), pd(1, 6);
  for (int trial = 0; trial < 25; ++trial) {
    const Index n = nd(rng);
    const int degree = deg(rng);
    const int steps = pd(rng);
    const auto p = random_polynomial<S>(n, degree, rng);
    const auto u0 = random_vector<S>(n, rng);
    const auto k = run_arnoldi(p, u0, steps);
    if (k.breakdown()) continue;

    // m = Np: H_p and Q_p coincide.
    const Index m = static_cast<Index>(degree) * steps;
    Vector<S> v0 = Vector<S>::Zero(m * n);
    v0.head(n) = u0;
    const auto ref = textbook_arnoldi(assemble_Lm(p, m), v0, steps);
    CHECK(max_abs(k.hessenberg().topRows(steps) - ref.hessenberg.topRows(steps)) <= 1e-12);
    CHECK(max_abs(k.basis().topLeftCorner(m * n, steps) - ref.basis.leftCols(steps)) <= 1e-12);

    // m = Np + 1 also holds q_{p+1} and h_{p+1,p} in full.
    const Index m1 = m + 1;
    Vector<S> w0 = Vector<S>::Zero(m1 * n);
    w0.head(n) = u0;
    const auto full = textbook_arnoldi(assemble_Lm(p, m1), w0, steps);
    if (full.breakdown) continue;
    CHECK(max_abs(k.hessenberg() - full.hessenberg) <= 1e-12);
    CHECK(max_abs(k.basis() - full.basis) <= 1e-12);
  }
}

TEST_CASE("structure, orthonormality, relation and storage") {
  std::mt19937_64 rng(44);
  const Index n = 7;
  const auto p = random_polynomial<Real>(n, 2, rng, 3.0);
  const auto u0 = random_vector<Real>(n, rng);
  const int steps = 12;
  const auto k = run_arnoldi(p, u0, steps);
  REQUIRE_FALSE(k.breakdown());
  CHECK(k.basis().rows() == n * (1 + 2 * steps));
  CHECK(k.basis_storage() == n * (1 + 2 * steps) * (steps + 1));
  // 0-based column 2 (the third) may only fill 1 + 2*2 = 5 blocks.
  CHECK(k.column_blocks(2) == 5);
  CHECK(k.basis().col(2).tail(k.basis().rows() - 5 * n).cwiseAbs().maxCoeff() == 0.0);
  for (int l = 0; l <= steps; ++l)
    CHECK(max_abs(k.basis().col(l).tail(k.basis().rows() - n * k.column_blocks(l))) == 0.0);
  CHECK(orthonormality_defect(k.basis()) <= 1e-12);
  CHECK(arnoldi_residual(p, k) <= 1e-10);
  for (Index i = 0; i < k.hessenberg().rows(); ++i)
    for (Index j = 0; j < k.hessenberg().cols(); ++j)
      if (i > j + 1) CHECK(k.hessenberg()(i, j) == 0.0);
  for (int j = 0; j < steps; ++j) CHECK(k.hessenberg()(j + 1, j) >= 0.0);
}

TEST_CASE("advection-diffusion runs 40 steps without breakdown") {
  const auto prob = gen_advdiff1(200, 3e-4);
  const auto k = run_arnoldi(prob.poly, prob.u0, 40);
  CHECK_FALSE(k.breakdown());
  CHECK(k.steps() == 40);
  CHECK(orthonormality_defect(k.basis()) <= 1e-12);
  CHECK(arnoldi_residual(prob.poly, k) <= 1e-10);
}

TEST_CASE("complex arnoldi keeps a real nonnegative subdiagonal") {
  std::mt19937_64 rng(45);
  const auto p = random_polynomial<Complex>(5, 1, rng);
  const auto k = run_arnoldi(p, random_vector<Complex>(5, rng), 6);
  for (int j = 0; j < k.steps(); ++j) {
    CHECK(k.hessenberg()(j + 1, j).imag() == 0.0);
    CHECK(k.hessenberg()(j + 1, j).real() >= 0.0);
  }
  CHECK(orthonormality_defect(k.basis()) <= 1e-12);
  CHECK(arnoldi_residual(p, k) <= 1e-10);
}
