#pragma once

#include "paramexpmv/linalg.hpp"

#include <filesystem>
#include <stdexcept>
#include <string>

namespace paramexpmv {

/// Parse or I/O failure; the message names the file and, for parse errors, the
/// 1-based line.
class MatrixMarketError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class MmField { real, complex, integer, pattern };
enum class MmSymmetry { general, symmetric, skew_symmetric, hermitian };

struct MatrixMarketHeader {
  bool coordinate = true;
  MmField field = MmField::real;
  MmSymmetry symmetry = MmSymmetry::general;
};

MatrixMarketHeader read_matrix_market_header(const std::filesystem::path& path);

/// Reads coordinate or array files; symmetric, skew-symmetric and hermitian
/// storage is expanded to the full matrix. Reading a complex file as Real
/// throws.
template <ScalarField S>
SparseMatrix<S> read_matrix_market(const std::filesystem::path& path);

/// Reads an n x 1 matrix (array or coordinate) as a vector.
template <ScalarField S>
Vector<S> read_matrix_market_vector(const std::filesystem::path& path);

template <ScalarField S>
void write_matrix_market(const std::filesystem::path& path, const SparseMatrix<S>& a);

/// Writes an n x 1 array-format file.
template <ScalarField S>
void write_matrix_market_vector(const std::filesystem::path& path, const Vector<S>& v);

}  // namespace paramexpmv
