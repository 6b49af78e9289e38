#include "paramexpmv/problems.hpp"

#include "paramexpmv/matrix_market.hpp"

#include "json.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <stdexcept>

namespace paramexpmv {
namespace {

SparseMatrix<Real> tridiag(Index n, double sub, double diag, double super) {
  std::vector<Triplet<Real>> t;
  for (Index i = 0; i < n; ++i) {
    if (i > 0 && sub != 0.0) t.push_back({i, i - 1, sub});
    if (diag != 0.0) t.push_back({i, i, diag});
    if (i + 1 < n && super != 0.0) t.push_back({i, i + 1, super});
  }
  return SparseMatrix<Real>::from_triplets(n, n, std::move(t));
}

Vector<Real> advdiff_initial(Index n) {
  const double dx = 1.0 / static_cast<double>(n + 1);
  Vector<Real> u0(n);
  for (Index i = 0; i < n; ++i) {
    const double x = static_cast<double>(i + 1) * dx;
    u0[i] = 16.0 * std::pow((1.0 - x) * x, 2);
  }
  return u0;
}

std::vector<SparseMatrix<Real>> advdiff_base(Index n, double a) {
  if (n < 2) throw std::invalid_argument("advection-diffusion generator needs n >= 2");
  const double dx = 1.0 / static_cast<double>(n + 1);
  const double d = a / (dx * dx);
  const double c = 1.0 / (2.0 * dx);
  return {tridiag(n, d, -2.0 * d, d), tridiag(n, c, 0.0, -c)};
}

double require(const ProblemSpec& spec, const std::string& key) {
  const auto it = spec.parameters.find(key);
  if (it == spec.parameters.end())
    throw std::invalid_argument("problem '" + to_string(spec.name) + "' needs parameter '" + key + "'");
  return it->second;
}

}  // namespace

Problem<Real> gen_advdiff1(Index n, double a) {
  return {MatrixPolynomial<Real>(advdiff_base(n, a)), advdiff_initial(n)};
}

Problem<Real> gen_advdiff2(Index n, double a, double b) {
  auto coeffs = advdiff_base(n, a);
  std::vector<Triplet<Real>> t;
  if (b != 0.0)
    for (Index i = 0; i < n; ++i) t.push_back({i, n - 1 - i, b});
  coeffs.push_back(SparseMatrix<Real>::from_triplets(n, n, std::move(t)));
  return {MatrixPolynomial<Real>(std::move(coeffs)), advdiff_initial(n)};
}

Problem<Real> gen_wave(Index points_per_dim, double gamma1) {
  const Index m = points_per_dim;
  if (m < 3) throw std::invalid_argument("wave generator needs at least 3 points per dimension");
  const Index n = m * m * m;
  const double h = 1.0 / static_cast<double>(m + 1);
  auto node = [m](Index i, Index j, Index k) { return i + m * (j + m * k); };

  std::vector<Triplet<Real>> a0;
  std::vector<Triplet<Real>> a1;
  for (Index k = 0; k < m; ++k)
    for (Index j = 0; j < m; ++j)
      for (Index i = 0; i < m; ++i) {
        const Index r = n + node(i, j, k);  // velocity row
        a0.push_back({node(i, j, k), n + node(i, j, k), 1.0});
        a0.push_back({r, node(i, j, k), -6.0});
        if (i > 0) a0.push_back({r, node(i - 1, j, k), 1.0});
        if (i + 1 < m) a0.push_back({r, node(i + 1, j, k), 1.0});
        if (j > 0) a0.push_back({r, node(i, j - 1, k), 1.0});
        if (j + 1 < m) a0.push_back({r, node(i, j + 1, k), 1.0});
        if (k > 0) a0.push_back({r, node(i, j, k - 1), 1.0});
        if (k + 1 < m) a0.push_back({r, node(i, j, k + 1), 1.0});
        if (i == 0 && gamma1 != 0.0) a0.push_back({r, r, -gamma1});
        if (i == m - 1) a1.push_back({r, r, -1.0});
      }

  Vector<Real> u0 = Vector<Real>::Zero(2 * n);
  for (Index k = 0; k < m; ++k)
    for (Index j = 0; j < m; ++j)
      for (Index i = 0; i < m; ++i) {
        const double x = static_cast<double>(i + 1) * h;
        const double y = static_cast<double>(j + 1) * h;
        const double z = static_cast<double>(k + 1) * h;
        const double s = std::sin(std::numbers::pi * x) * std::sin(std::numbers::pi * y) *
                         std::sin(std::numbers::pi * z);
        u0[node(i, j, k)] = s * s;
      }

  std::vector<SparseMatrix<Real>> coeffs;
  coeffs.push_back(SparseMatrix<Real>::from_triplets(2 * n, 2 * n, std::move(a0)));
  coeffs.push_back(SparseMatrix<Real>::from_triplets(2 * n, 2 * n, std::move(a1)));
  return {MatrixPolynomial<Real>(std::move(coeffs)), std::move(u0)};
}

template <ScalarField S>
Problem<S> load_problem(std::span<const std::filesystem::path> coeff_paths,
                        const std::filesystem::path& u0_path) {
  if (coeff_paths.empty()) throw std::invalid_argument("load_problem: no coefficient files");
  std::vector<SparseMatrix<S>> coeffs;
  for (const auto& path : coeff_paths) {
    auto a = read_matrix_market<S>(path);
    if (!a.square() || (!coeffs.empty() && a.rows() != coeffs.front().rows()))
      throw DimensionError(path.string() + ": matrix is " + std::to_string(a.rows()) + "x" +
                           std::to_string(a.cols()) + ", expected square of the same size as A_0");
    coeffs.push_back(std::move(a));
  }
  auto u0 = read_matrix_market_vector<S>(u0_path);
  if (u0.size() != coeffs.front().rows())
    throw DimensionError(u0_path.string() + ": vector length " + std::to_string(u0.size()) +
                         " does not match matrix dimension " + std::to_string(coeffs.front().rows()));
  return {MatrixPolynomial<S>(std::move(coeffs)), std::move(u0)};
}

bool any_complex(std::span<const std::filesystem::path> paths) {
  for (const auto& p : paths)
    if (read_matrix_market_header(p).field == MmField::complex) return true;
  return false;
}

std::string to_string(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::advdiff1: return "advdiff1";
    case ProblemKind::advdiff2: return "advdiff2";
    case ProblemKind::wave: return "wave";
    case ProblemKind::file: return "file";
  }
  return "file";
}

ProblemKind problem_kind_from_string(const std::string& name) {
  if (name == "advdiff1") return ProblemKind::advdiff1;
  if (name == "advdiff2") return ProblemKind::advdiff2;
  if (name == "wave") return ProblemKind::wave;
  if (name == "file") return ProblemKind::file;
  throw std::invalid_argument("unknown problem '" + name + "'");
}

ProblemSpec read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path.string() + ": cannot open manifest");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
  ProblemSpec spec;
  try {
    spec.name = problem_kind_from_string(j.at("name").get<std::string>());
    spec.n = j.value("n", Index{0});
    if (j.contains("parameters")) spec.parameters = j.at("parameters").get<std::map<std::string, double>>();
    if (j.contains("paths")) {
      const auto base = path.parent_path();
      for (const auto& p : j.at("paths")) {
        std::filesystem::path fp = p.get<std::string>();
        spec.paths.push_back(fp.is_relative() ? base / fp : fp);
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
  if (spec.name == ProblemKind::file && spec.paths.size() < 2)
    throw std::runtime_error(path.string() + ": file problems need at least A_0 and u0 paths");
  return spec;
}

void write_manifest(const std::filesystem::path& path, const ProblemSpec& spec) {
  nlohmann::ordered_json j;
  j["name"] = to_string(spec.name);
  j["n"] = spec.n;
  j["parameters"] = spec.parameters;
  auto paths = nlohmann::ordered_json::array();
  for (const auto& p : spec.paths) paths.push_back(p.string());
  j["paths"] = paths;
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error(path.string() + ": write failed");
}

Problem<Real> generate(const ProblemSpec& spec) {
  if (!spec.paths.empty()) {
    const std::span<const std::filesystem::path> all(spec.paths);
    return load_problem<Real>(all.first(all.size() - 1), all.back());
  }
  switch (spec.name) {
    case ProblemKind::advdiff1: return gen_advdiff1(spec.n, require(spec, "a"));
    case ProblemKind::advdiff2: return gen_advdiff2(spec.n, require(spec, "a"), require(spec, "b"));
    case ProblemKind::wave:
      return gen_wave(static_cast<Index>(require(spec, "points")), require(spec, "gamma1"));
    case ProblemKind::file: break;
  }
  throw std::invalid_argument("file problem without paths");
}

template <ScalarField S>
std::vector<std::filesystem::path> write_problem(const Problem<S>& problem, const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> paths;
  for (int l = 0; l <= problem.poly.degree(); ++l) {
    paths.push_back(dir / ("A" + std::to_string(l) + ".mtx"));
    write_matrix_market(paths.back(), problem.poly.coeff(l));
  }
  paths.push_back(dir / "u0.mtx");
  write_matrix_market_vector(paths.back(), problem.u0);
  return paths;
}

Problem<Complex> to_complex(const Problem<Real>& p) { return {to_complex(p.poly), to_complex(p.u0)}; }

template Problem<Real> load_problem<Real>(std::span<const std::filesystem::path>, const std::filesystem::path&);
template Problem<Complex> load_problem<Complex>(std::span<const std::filesystem::path>,
                                                const std::filesystem::path&);
template std::vector<std::filesystem::path> write_problem<Real>(const Problem<Real>&, const std::filesystem::path&);
template std::vector<std::filesystem::path> write_problem<Complex>(const Problem<Complex>&,
                                                                   const std::filesystem::path&);

}  // namespace paramexpmv
