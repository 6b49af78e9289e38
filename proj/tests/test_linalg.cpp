#include "doctest.h"

#include "paramexpmv/linalg.hpp"
#include "paramexpmv/matrix_market.hpp"
#include "test_util.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

using namespace paramexpmv;
using namespace paramexpmv::testing;

namespace {

SparseMatrix<Real> tridiag3(Index n, double sub, double diag, double super) {
  std::vector<Triplet<Real>> t;
  for (Index i = 0; i < n; ++i) {
    if (i > 0) t.push_back({i, i - 1, sub});
    t.push_back({i, i, diag});
    if (i + 1 < n) t.push_back({i, i + 1, super});
  }
  return SparseMatrix<Real>::from_triplets(n, n, std::move(t));
}

std::filesystem::path temp_dir() {
  auto dir = std::filesystem::temp_directory_path() / "paramexpmv_test_linalg";
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("spmv small cases") {
  const Vector<Real> x{{1.0, 2.0, 3.0}};
  CHECK(spmv(SparseMatrix<Real>::identity(3), x) == x);
  CHECK(spmv(SparseMatrix<Real>(3, 3), x) == Vector<Real>::Zero(3));
  const Vector<Real> e1{{1.0, 0.0, 0.0}};
  CHECK(spmv(tridiag3(3, 1, -2, 1), e1) == Vector<Real>{{-2.0, 1.0, 0.0}});
  CHECK_THROWS_AS(spmv(SparseMatrix<Real>::identity(4), x), DimensionError);
}

TEST_CASE("triplet construction merges duplicates and sorts columns") {
  const auto a = SparseMatrix<Real>::from_triplets(2, 3, {{1, 2, 1.0}, {0, 1, 2.0}, {1, 0, 3.0}, {0, 1, 4.0}});
  CHECK(a.nnz() == 3);
  CHECK(a.coeff(0, 1) == 6.0);
  CHECK(a.coeff(1, 0) == 3.0);
  CHECK(a.coeff(1, 1) == 0.0);
  for (Index i = 0; i < a.rows(); ++i)
    for (Index k = a.row_ptr()[i] + 1; k < a.row_ptr()[i + 1]; ++k) CHECK(a.col_idx()[k - 1] < a.col_idx()[k]);
  CHECK_THROWS_AS(SparseMatrix<Real>::from_triplets(2, 2, {{2, 0, 1.0}}), DimensionError);
}

TEST_CASE_TEMPLATE("spmv agrees with the dense product", S, Real, Complex) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = random_sparse<S>(20, 20, 0.3, rng);
    const auto x = random_vector<S>(20, rng);
    const Vector<S> dense = a.to_dense() * x;
    CHECK(max_abs(spmv(a, x) - dense) <= 1e-14 * std::max(1.0, max_abs(dense)));
    const Vector<S> adj = a.to_dense().adjoint() * x;
    CHECK(max_abs(spmv_adjoint(a, x) - adj) <= 1e-14 * std::max(1.0, max_abs(adj)));
  }
}

TEST_CASE("two-norm estimate examples") {
  const auto d = SparseMatrix<Real>::from_triplets(3, 3, {{0, 0, 3.0}, {1, 1, 1.0}, {2, 2, 2.0}});
  CHECK(two_norm_estimate(d) == doctest::Approx(3.0).epsilon(1e-8));
  CHECK(two_norm_estimate(SparseMatrix<Real>(5, 5)) == 0.0);

  // Large path: ||tridiag(1, 0, -1)|| = 2 cos(pi/(n+1)) for the skew stencil.
  const Index n = 200;
  const double dx = 1.0 / (n + 1);
  const auto a1 = tridiag3(n, 1.0 / (2 * dx), 0.0, -1.0 / (2 * dx));
  const double exact = std::cos(std::numbers::pi / (n + 1)) / dx;
  CHECK(std::abs(two_norm_estimate(a1) - exact) <= 1e-8 * exact);
  // t = 0.5, eps = 1.5e-2
  CHECK(0.5 * 1.5e-2 * two_norm_estimate(a1) == doctest::Approx(1.50731586933803).epsilon(1e-8));
}

TEST_CASE_TEMPLATE("two-norm estimate matches the dense SVD", S, Real, Complex) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> dim(1, 32);
  for (int trial = 0; trial < 30; ++trial) {
    const auto a = random_sparse<S>(dim(rng), dim(rng), 0.5, rng);
    const double exact = a.nnz() ? a.to_dense().jacobiSvd().singularValues()[0] : 0.0;
    CHECK(std::abs(two_norm_estimate(a, 1e-8) - exact) <= 1e-8 * std::max(exact, 1e-300));
  }
  // Lanczos path (both dimensions above the dense threshold).
  for (int trial = 0; trial < 3; ++trial) {
    const auto a = random_sparse<S>(90, 120, 0.05, rng);
    const double exact = a.to_dense().jacobiSvd().singularValues()[0];
    CHECK(std::abs(two_norm_estimate(a, 1e-8) - exact) <= 1e-8 * exact);
  }
}

TEST_CASE("log norm examples") {
  CHECK(log_norm(SparseMatrix<Real>::from_triplets(2, 2, {{0, 0, -1.0}, {1, 1, -2.0}})) ==
        doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(log_norm(SparseMatrix<Real>::from_triplets(2, 2, {{0, 1, 1.0}})) == doctest::Approx(0.5).epsilon(1e-12));

  const Index n = 200;
  const double a = 3e-4;
  const double dx = 1.0 / (n + 1);
  const double d = a / (dx * dx);
  const auto lap = tridiag3(n, d, -2 * d, d);
  const double mu = log_norm(lap);
  const double exact = -d * (2.0 - 2.0 * std::cos(std::numbers::pi / (n + 1)));
  CHECK(mu < 0.0);
  CHECK(std::abs(mu - exact) <= 1e-8 * (two_norm_estimate(lap) + 1.0));
  CHECK_THROWS_AS(log_norm(SparseMatrix<Real>(2, 3)), DimensionError);
}

TEST_CASE_TEMPLATE("log norm properties", S, Real, Complex) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    const Index n = trial < 7 ? 12 : 100;  // dense and Lanczos paths
    const auto a = random_sparse<S>(n, n, 0.2, rng);
    const double mu = log_norm(a, 1e-8);
    const double nrm = two_norm_estimate(a, 1e-8);
    CHECK(std::abs(mu) <= nrm + 1e-8 * (nrm + 1));

    const DenseMatrix<S> dense = a.to_dense();
    const DenseMatrix<S> herm = (dense + dense.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<DenseMatrix<S>> eig(herm);
    CHECK(std::abs(mu - eig.eigenvalues().maxCoeff()) <= 1e-8 * (nrm + 1));

    // -(B^H B) - I is Hermitian negative definite.
    const DenseMatrix<S> neg = -(dense.adjoint() * dense) - DenseMatrix<S>::Identity(n, n);
    CHECK(log_norm(SparseMatrix<S>::from_dense(neg)) < 0.0);
  }
}

TEST_CASE_TEMPLATE("MatrixMarket write then read is the identity", S, Real, Complex) {
  std::mt19937_64 rng(3);
  const auto dir = temp_dir();
  const auto a = random_sparse<S>(7, 5, 0.4, rng);
  write_matrix_market(dir / "a.mtx", a);
  CHECK(read_matrix_market<S>(dir / "a.mtx") == a);
  const auto v = random_vector<S>(6, rng);
  write_matrix_market_vector(dir / "v.mtx", v);
  CHECK(read_matrix_market_vector<S>(dir / "v.mtx") == v);
}

TEST_CASE("MatrixMarket symmetric storage and errors") {
  const auto dir = temp_dir();
  {
    std::ofstream out(dir / "sym.mtx");
    out << "%%MatrixMarket matrix coordinate real symmetric\n% comment\n3 3 2\n2 1 5.0\n3 3 1.5\n";
  }
  const auto s = read_matrix_market<Real>(dir / "sym.mtx");
  CHECK(s.coeff(0, 1) == 5.0);
  CHECK(s.coeff(1, 0) == 5.0);
  CHECK(s.coeff(2, 2) == 1.5);
  {
    std::ofstream out(dir / "herm.mtx");
    out << "%%MatrixMarket matrix coordinate complex hermitian\n2 2 1\n2 1 1.0 2.0\n";
  }
  const auto h = read_matrix_market<Complex>(dir / "herm.mtx");
  CHECK(h.coeff(0, 1) == Complex(1.0, -2.0));
  CHECK_THROWS_AS(read_matrix_market<Real>(dir / "herm.mtx"), MatrixMarketError);
  {
    std::ofstream out(dir / "bad.mtx");
    out << "%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1.0\n1 x 2.0\n";
  }
  try {
    (void)read_matrix_market<Real>(dir / "bad.mtx");
    FAIL("expected a parse error");
  } catch (const MatrixMarketError& e) {
    CHECK(std::string(e.what()).find("bad.mtx:4") != std::string::npos);
  }
  try {
    (void)read_matrix_market<Real>(dir / "missing.mtx");
    FAIL("expected an I/O error");
  } catch (const MatrixMarketError& e) {
    CHECK(std::string(e.what()).find("missing.mtx") != std::string::npos);
  }
}
