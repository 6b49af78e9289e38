#include "paramexpmv/matfun.hpp"

#include <Eigen/LU>

#include <array>
#include <cmath>
#include <stdexcept>

namespace paramexpmv {
namespace {

template <ScalarField S>
double norm1(const DenseMatrix<S>& a) {
  if (a.size() == 0) return 0.0;
  return a.cwiseAbs().colwise().sum().maxCoeff();
}

template <ScalarField S>
DenseMatrix<S> pade_solve(const DenseMatrix<S>& u, const DenseMatrix<S>& v) {
  return (v - u).partialPivLu().solve(v + u);
}

// Pade approximants r_m(A) for m in {3, 5, 7, 9}; coefficients b_0..b_m.
template <ScalarField S, std::size_t M>
DenseMatrix<S> pade_low(const DenseMatrix<S>& a, const std::array<double, M>& b) {
  const Index n = a.rows();
  const DenseMatrix<S> id = DenseMatrix<S>::Identity(n, n);
  const DenseMatrix<S> a2 = a * a;
  DenseMatrix<S> power = id;
  DenseMatrix<S> odd = b[1] * id;
  DenseMatrix<S> even = b[0] * id;
  for (std::size_t k = 2; k < M; k += 2) {
    power = power * a2;
    even += b[k] * power;
    odd += b[k + 1] * power;
  }
  return pade_solve<S>(a * odd, even);
}

template <ScalarField S>
DenseMatrix<S> pade13(const DenseMatrix<S>& a) {
  static constexpr std::array<double, 14> b = {
      64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
      129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
      1323241920.0,        40840800.0,          960960.0,           16380.0,
      182.0,               1.0};
  const Index n = a.rows();
  const DenseMatrix<S> id = DenseMatrix<S>::Identity(n, n);
  const DenseMatrix<S> a2 = a * a;
  const DenseMatrix<S> a4 = a2 * a2;
  const DenseMatrix<S> a6 = a4 * a2;
  const DenseMatrix<S> u = a * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 +
                                b[5] * a4 + b[3] * a2 + b[1] * id);
  const DenseMatrix<S> v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 +
                           b[2] * a2 + b[0] * id;
  return pade_solve<S>(u, v);
}

}  // namespace

template <ScalarField S>
DenseMatrix<S> expm(const DenseMatrix<S>& a) {
  if (a.rows() != a.cols()) throw DimensionError("expm: matrix must be square");
  const Index n = a.rows();
  if (n == 0) return a;
  if (!a.allFinite()) throw std::overflow_error("expm: non-finite input");

  const double anorm = norm1(a);
  static constexpr std::array<double, 4> theta = {1.495585217958292e-2, 2.539398330063230e-1,
                                                  9.504178996162932e-1, 2.097847961257068e0};
  static constexpr std::array<double, 4> b3 = {120.0, 60.0, 12.0, 1.0};
  static constexpr std::array<double, 6> b5 = {30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0};
  static constexpr std::array<double, 8> b7 = {17297280.0, 8648640.0, 1995840.0, 277200.0,
                                               25200.0,    1512.0,    56.0,      1.0};
  static constexpr std::array<double, 10> b9 = {17643225600.0, 8821612800.0, 2075673600.0,
                                                302702400.0,   30270240.0,   2162160.0,
                                                110880.0,      3960.0,       90.0,
                                                1.0};
  if (anorm <= theta[0]) return pade_low<S>(a, b3);
  if (anorm <= theta[1]) return pade_low<S>(a, b5);
  if (anorm <= theta[2]) return pade_low<S>(a, b7);
  if (anorm <= theta[3]) return pade_low<S>(a, b9);

  constexpr double theta13 = 5.371920351148152;
  const int s = std::max(0, static_cast<int>(std::ceil(std::log2(anorm / theta13))));
  if (s > 1000) throw std::overflow_error("expm: norm too large for scaling and squaring");
  DenseMatrix<S> x = pade13<S>(a / std::ldexp(1.0, s));
  for (int k = 0; k < s; ++k) x = x * x;
  if (!x.allFinite()) throw std::overflow_error("expm: result overflows");
  return x;
}

template <ScalarField S>
PhiPair<S> phi_columns(const DenseMatrix<S>& h, double t) {
  if (h.rows() != h.cols()) throw DimensionError("phi_columns: H must be square");
  const Index p = h.rows();
  if (p == 0) throw DimensionError("phi_columns: H must be non-empty");
  DenseMatrix<S> aug = DenseMatrix<S>::Zero(p + 2, p + 2);
  aug.topLeftCorner(p, p) = t * h;
  aug(0, p) = S(1);
  aug(0, p + 1) = S(1);
  aug(p + 1, p) = S(1);
  const DenseMatrix<S> e = expm<S>(aug);
  PhiPair<S> out;
  out.phi1_col = e.col(p + 1).head(p);
  out.phi2_col = e.col(p).head(p) - out.phi1_col;
  return out;
}

template DenseMatrix<Real> expm<Real>(const DenseMatrix<Real>&);
template DenseMatrix<Complex> expm<Complex>(const DenseMatrix<Complex>&);
template PhiPair<Real> phi_columns<Real>(const DenseMatrix<Real>&, double);
template PhiPair<Complex> phi_columns<Complex>(const DenseMatrix<Complex>&, double);

}  // namespace paramexpmv
