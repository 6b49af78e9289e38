#include "doctest.h"

#include "paramexpmv/matfun.hpp"
#include "paramexpmv/reference.hpp"
#include "test_util.hpp"

#include <cmath>

using namespace paramexpmv;
using namespace paramexpmv::testing;

TEST_CASE("dense_solution closed forms") {
  std::mt19937_64 rng(61);
  const auto p = random_polynomial<Real>(4, 2, rng);
  const auto u0 = random_vector<Real>(4, rng);
  CHECK(max_abs(dense_solution(p, u0, 0.0, 0.3) - u0) <= 1e-15);

  const MatrixPolynomial<Real> p0({p.coeff(0)});
  const Vector<Real> direct = expm<Real>(DenseMatrix<Real>(0.8 * p.coeff(0).to_dense())) * u0;
  CHECK(max_abs(dense_solution(p0, u0, 0.8, 5.0) - direct) <= 1e-15);

  const Vector<Real> one{{1.0}};
  CHECK(dense_solution(scalar_shift(), one, 1.5, 0.4)[0] == doctest::Approx(std::exp(0.6)).epsilon(1e-14));
  CHECK_THROWS_AS(dense_solution(p, u0, 1.0, 0.1, 3), std::length_error);
}

TEST_CASE("dense_coefficients") {
  std::mt19937_64 rng(62);
  const auto p = random_polynomial<Real>(4, 2, rng);
  const auto u0 = random_vector<Real>(4, rng);
  const double t = 0.7;
  const auto c = dense_coefficients(p, u0, t, 5);
  REQUIRE(c.size() == 5);
  CHECK(max_abs(c[0] - dense_solution(p, u0, t, 0.0)) <= 1e-12);

  // c_1 = d/d eps u(t, eps) at eps = 0.
  const double h = 1e-5;
  const Vector<Real> fd = (dense_solution(p, u0, t, h) - dense_solution(p, u0, t, -h)) / (2 * h);
  CHECK(max_abs(fd - c[1]) <= 1e-9);

  const Vector<Real> one{{1.0}};
  const auto s = dense_coefficients(scalar_shift(), one, 1.3, 8);
  for (int l = 0; l < 8; ++l) CHECK(s[l][0] == doctest::Approx(std::pow(1.3, l) / std::tgamma(l + 1.0)).epsilon(1e-13));
  CHECK_THROWS_AS(dense_coefficients(p, u0, t, 100, 50), std::length_error);
}

TEST_CASE("truncated series converges to the dense solution") {
  std::mt19937_64 rng(63);
  const auto p = random_polynomial<Real>(5, 2, rng);
  const auto u0 = random_vector<Real>(5, rng);
  const double t = 1.0, eps = 0.4;
  const Vector<Real> exact = dense_solution(p, u0, t, eps);
  const auto c = dense_coefficients(p, u0, t, 30);
  double prev = std::numeric_limits<double>::infinity();
  Vector<Real> sum = Vector<Real>::Zero(5);
  double power = 1.0;
  int decreases = 0;
  for (int m = 0; m < 30; ++m) {
    sum += power * c[m];
    power *= eps;
    const double err = (sum - exact).norm();
    if (err < prev) ++decreases;
    prev = err;
  }
  CHECK(prev <= 1e-13 * exact.norm());
  CHECK(decreases >= 20);
}

TEST_CASE_TEMPLATE("textbook Arnoldi", S, Real, Complex) {
  std::mt19937_64 rng(64);
  const auto b = random_sparse<S>(12, 12, 0.4, rng);
  const auto v0 = random_vector<S>(12, rng);
  const auto r = textbook_arnoldi(b, v0, 6);
  REQUIRE_FALSE(r.breakdown);
  const DenseMatrix<S> q = r.basis;
  CHECK(max_abs(DenseMatrix<S>(q.adjoint() * q) - DenseMatrix<S>::Identity(7, 7)) <= 1e-12);
  CHECK(max_abs(DenseMatrix<S>(b.to_dense() * q.leftCols(6) - q * r.hessenberg)) <= 1e-12 * max_abs(b.to_dense()) * 12);
  for (int j = 0; j < 6; ++j) CHECK(std::real(r.hessenberg(j + 1, j)) >= 0.0);

  const auto diag = SparseMatrix<S>::from_triplets(2, 2, {{0, 0, S(1.0)}, {1, 1, S(2.0)}});
  const Vector<S> e1 = Vector<S>::Unit(2, 0);
  const auto bd = textbook_arnoldi(diag, e1, 3);
  CHECK(bd.breakdown);
  CHECK(bd.hessenberg.cols() == 1);
}
