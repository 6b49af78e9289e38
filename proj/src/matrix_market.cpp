#include "paramexpmv/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace paramexpmv {
namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

[[noreturn]] void fail(const std::filesystem::path& path, long line, const std::string& what) {
  std::ostringstream msg;
  msg << path.string();
  if (line > 0) msg << ":" << line;
  msg << ": " << what;
  throw MatrixMarketError(msg.str());
}

class Reader {
 public:
  explicit Reader(const std::filesystem::path& path) : path_(path), in_(path) {
    if (!in_) fail(path_, 0, "cannot open file");
  }

  MatrixMarketHeader header() {
    std::string line;
    if (!std::getline(in_, line)) fail(path_, 1, "empty file");
    line_no_ = 1;
    std::istringstream ss(line);
    std::string banner, object, format, field, symmetry;
    ss >> banner >> object >> format >> field >> symmetry;
    if (banner != "%%MatrixMarket" || lower(object) != "matrix")
      fail(path_, 1, "missing '%%MatrixMarket matrix' banner");
    MatrixMarketHeader h;
    format = lower(format);
    if (format == "coordinate")
      h.coordinate = true;
    else if (format == "array")
      h.coordinate = false;
    else
      fail(path_, 1, "unknown format '" + format + "'");
    field = lower(field);
    if (field == "real" || field == "double")
      h.field = MmField::real;
    else if (field == "complex")
      h.field = MmField::complex;
    else if (field == "integer")
      h.field = MmField::integer;
    else if (field == "pattern")
      h.field = MmField::pattern;
    else
      fail(path_, 1, "unknown field '" + field + "'");
    symmetry = lower(symmetry);
    if (symmetry == "general")
      h.symmetry = MmSymmetry::general;
    else if (symmetry == "symmetric")
      h.symmetry = MmSymmetry::symmetric;
    else if (symmetry == "skew-symmetric")
      h.symmetry = MmSymmetry::skew_symmetric;
    else if (symmetry == "hermitian")
      h.symmetry = MmSymmetry::hermitian;
    else
      fail(path_, 1, "unknown symmetry '" + symmetry + "'");
    if (h.field == MmField::pattern && !h.coordinate) fail(path_, 1, "pattern requires coordinate format");
    return h;
  }

  // Next non-comment, non-blank line.
  bool next(std::istringstream& out) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      const auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos || line[first] == '%') continue;
      out = std::istringstream(line);
      return true;
    }
    return false;
  }

  [[noreturn]] void error(const std::string& what) const { fail(path_, line_no_, what); }

 private:
  std::filesystem::path path_;
  std::ifstream in_;
  long line_no_ = 0;
};

template <ScalarField S>
S read_value(std::istringstream& ss, MmField field, Reader& r) {
  if (field == MmField::pattern) return S(1);
  double re = 0.0;
  if (!(ss >> re)) r.error("missing value");
  if (field == MmField::complex) {
    double im = 0.0;
    if (!(ss >> im)) r.error("missing imaginary part");
    if constexpr (std::same_as<S, Complex>)
      return Complex(re, im);
    else
      r.error("complex entry cannot be read into a real matrix");
  }
  return S(re);
}

template <ScalarField S>
S conj_if_complex(S v) {
  if constexpr (std::same_as<S, Complex>)
    return std::conj(v);
  else
    return v;
}

}  // namespace

MatrixMarketHeader read_matrix_market_header(const std::filesystem::path& path) {
  Reader r(path);
  return r.header();
}

template <ScalarField S>
SparseMatrix<S> read_matrix_market(const std::filesystem::path& path) {
  Reader r(path);
  const auto h = r.header();
  if constexpr (std::same_as<S, Real>) {
    if (h.field == MmField::complex) fail(path, 1, "complex matrix cannot be read as real");
  }
  std::istringstream ss;
  if (!r.next(ss)) r.error("missing size line");
  Index rows = 0, cols = 0, entries = 0;
  if (!(ss >> rows >> cols)) r.error("malformed size line");
  if (h.coordinate && !(ss >> entries)) r.error("malformed size line");
  if (rows < 0 || cols < 0 || entries < 0) r.error("negative size");
  if (h.symmetry != MmSymmetry::general && rows != cols) r.error("symmetric storage requires a square matrix");

  std::vector<Triplet<S>> t;
  auto push = [&](Index i, Index j, S v) {
    t.push_back({i, j, v});
    if (i == j) return;
    switch (h.symmetry) {
      case MmSymmetry::general: break;
      case MmSymmetry::symmetric: t.push_back({j, i, v}); break;
      case MmSymmetry::skew_symmetric: t.push_back({j, i, -v}); break;
      case MmSymmetry::hermitian: t.push_back({j, i, conj_if_complex(v)}); break;
    }
  };

  if (h.coordinate) {
    t.reserve(static_cast<std::size_t>(entries));
    for (Index k = 0; k < entries; ++k) {
      if (!r.next(ss)) r.error("file ends before all entries were read");
      Index i = 0, j = 0;
      if (!(ss >> i >> j)) r.error("malformed entry");
      if (i < 1 || i > rows || j < 1 || j > cols) r.error("entry index out of range");
      push(i - 1, j - 1, read_value<S>(ss, h.field, r));
    }
  } else {
    for (Index j = 0; j < cols; ++j) {
      const Index first = h.symmetry == MmSymmetry::general ? 0
                          : h.symmetry == MmSymmetry::skew_symmetric ? j + 1
                                                                     : j;
      for (Index i = first; i < rows; ++i) {
        if (!r.next(ss)) r.error("file ends before all entries were read");
        const S v = read_value<S>(ss, h.field, r);
        if (v != S(0)) push(i, j, v);
      }
    }
  }
  return SparseMatrix<S>::from_triplets(rows, cols, std::move(t));
}

template <ScalarField S>
Vector<S> read_matrix_market_vector(const std::filesystem::path& path) {
  const auto m = read_matrix_market<S>(path);
  if (m.cols() != 1) fail(path, 0, "expected an n x 1 vector, got " + std::to_string(m.cols()) + " columns");
  Vector<S> v = Vector<S>::Zero(m.rows());
  for (const auto& e : m.triplets()) v[e.row] = e.value;
  return v;
}

namespace {

void put_value(std::ostream& out, Real v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out << buf;
}

void put_value(std::ostream& out, Complex v) {
  put_value(out, v.real());
  out << ' ';
  put_value(out, v.imag());
}

template <ScalarField S>
const char* field_name() {
  return std::same_as<S, Complex> ? "complex" : "real";
}

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) fail(path, 0, "cannot open file for writing");
  return out;
}

}  // namespace

template <ScalarField S>
void write_matrix_market(const std::filesystem::path& path, const SparseMatrix<S>& a) {
  auto out = open_for_write(path);
  out << "%%MatrixMarket matrix coordinate " << field_name<S>() << " general\n";
  out << a.rows() << ' ' << a.cols() << ' ' << a.nnz() << '\n';
  for (const auto& e : a.triplets()) {
    out << e.row + 1 << ' ' << e.col + 1 << ' ';
    put_value(out, e.value);
    out << '\n';
  }
  if (!out) fail(path, 0, "write failed");
}

template <ScalarField S>
void write_matrix_market_vector(const std::filesystem::path& path, const Vector<S>& v) {
  auto out = open_for_write(path);
  out << "%%MatrixMarket matrix array " << field_name<S>() << " general\n";
  out << v.size() << " 1\n";
  for (Index i = 0; i < v.size(); ++i) {
    put_value(out, v[i]);
    out << '\n';
  }
  if (!out) fail(path, 0, "write failed");
}

template SparseMatrix<Real> read_matrix_market<Real>(const std::filesystem::path&);
template SparseMatrix<Complex> read_matrix_market<Complex>(const std::filesystem::path&);
template Vector<Real> read_matrix_market_vector<Real>(const std::filesystem::path&);
template Vector<Complex> read_matrix_market_vector<Complex>(const std::filesystem::path&);
template void write_matrix_market<Real>(const std::filesystem::path&, const SparseMatrix<Real>&);
template void write_matrix_market<Complex>(const std::filesystem::path&, const SparseMatrix<Complex>&);
template void write_matrix_market_vector<Real>(const std::filesystem::path&, const Vector<Real>&);
template void write_matrix_market_vector<Complex>(const std::filesystem::path&, const Vector<Complex>&);

}  // namespace paramexpmv
