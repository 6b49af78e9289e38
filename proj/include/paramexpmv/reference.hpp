#pragma once

// Dense brute-force oracles. Desk scale only.

#include "paramexpmv/toeplitz.hpp"

#include <vector>

namespace paramexpmv {

/// PARAMEXPMV_DENSE_CAP if set, else 2000.
Index dense_cap();

/// exp(t A(eps)) u0 with A(eps) formed densely.
template <ScalarField S>
Vector<S> dense_solution(const MatrixPolynomial<S>& p, const Vector<S>& u0, double t, S eps,
                         Index cap = dense_cap());

/// c_0(t), ..., c_{m-1}(t) as the blocks of exp(t L_m)(e_1 (x) u0).
template <ScalarField S>
std::vector<Vector<S>> dense_coefficients(const MatrixPolynomial<S>& p, const Vector<S>& u0, double t,
                                          Index m, Index cap = dense_cap());

template <ScalarField S>
struct ArnoldiReference {
  DenseMatrix<S> basis;       ///< dim x (steps + 1), or dim x steps on breakdown
  DenseMatrix<S> hessenberg;  ///< (steps + 1) x steps
  bool breakdown = false;
};

/// Plain Arnoldi on an explicit matrix: dense products, classical
/// Gram-Schmidt twice, nonnegative subdiagonal.
template <ScalarField S>
ArnoldiReference<S> textbook_arnoldi(const SparseMatrix<S>& b, const Vector<S>& v0, int steps);

}  // namespace paramexpmv
