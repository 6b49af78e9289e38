#pragma once

#include "paramexpmv/linalg.hpp"

namespace paramexpmv {

/// exp(A) by scaling and squaring with diagonal Pade approximants of degree
/// 3, 5, 7, 9 or 13, chosen from 1-norm thresholds (Higham 2005).
/// Throws std::overflow_error when the input or the result is not finite.
template <ScalarField S>
DenseMatrix<S> expm(const DenseMatrix<S>& a);

/// phi_1(tH) e_1 and phi_2(tH) e_1.
template <ScalarField S>
struct PhiPair {
  Vector<S> phi1_col;
  Vector<S> phi2_col;
};

/// Reads both columns off exp of the (p+2)x(p+2) augmented matrix
/// [tH e1 e1; 0 0 0; 0 1 0]: the last column is phi_1 e_1, the one before
/// it is (phi_1 + phi_2) e_1.
template <ScalarField S>
PhiPair<S> phi_columns(const DenseMatrix<S>& h, double t);

}  // namespace paramexpmv
