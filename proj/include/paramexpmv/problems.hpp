#pragma once

#include "paramexpmv/toeplitz.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace paramexpmv {

template <ScalarField S>
struct Problem {
  MatrixPolynomial<S> poly;
  Vector<S> u0;
};

/// 1-D advection-diffusion on (0, 1), Dirichlet boundaries, central
/// differences with dx = 1/(n+1):
///   A_0 = a/dx^2 tridiag(1, -2, 1),  A_1 = 1/(2 dx) tridiag(1, 0, -1),
///   (u0)_i = 16 ((1 - x_i) x_i)^2,   x_i = i dx.
Problem<Real> gen_advdiff1(Index n, double a);

/// gen_advdiff1 plus A_2 = b * (anti-diagonal ones), the reflected feedback
/// term eps^2 b y(t, 1 - x).
Problem<Real> gen_advdiff2(Index n, double a, double b);

/// Damped wave equation on the unit cube in first-order form, state
/// (u, u'), dimension 2 m^3 for m = points_per_dim:
///   A_0 = [0 I; -K -gamma1 C_1],  A_1 = [0 0; 0 -C_2].
/// K is the unscaled 7-point Laplacian stencil (6 on the diagonal, -1 per
/// neighbour, Dirichlet outside the grid), the mass matrix is the identity,
/// C_1 damps the node layer next to the face x = 0 and C_2 the layer next to
/// x = 1 (unit weight per node). Nodes are ordered x-fastest. The initial
/// displacement is (sin(pi x) sin(pi y) sin(pi z))^2 with zero velocity.
Problem<Real> gen_wave(Index points_per_dim, double gamma1);

/// Coefficients A_0..A_N from MatrixMarket files in degree order plus the
/// initial vector. Errors name the offending file.
template <ScalarField S>
Problem<S> load_problem(std::span<const std::filesystem::path> coeff_paths,
                        const std::filesystem::path& u0_path);

/// True if any of the files declares a complex field.
bool any_complex(std::span<const std::filesystem::path> paths);

enum class ProblemKind { advdiff1, advdiff2, wave, file };

std::string to_string(ProblemKind kind);
ProblemKind problem_kind_from_string(const std::string& name);

/// JSON manifest: {"name", "n", "parameters": {...}, "paths": [A_0, ..., A_N, u0]}.
/// Relative paths are resolved against the manifest's directory.
struct ProblemSpec {
  ProblemKind name = ProblemKind::file;
  Index n = 0;
  std::map<std::string, double> parameters;
  std::vector<std::filesystem::path> paths;
};

ProblemSpec read_manifest(const std::filesystem::path& path);
void write_manifest(const std::filesystem::path& path, const ProblemSpec& spec);

/// Generated problems from their parameters (a, b, gamma1, points), or the
/// manifest's files when paths are present.
Problem<Real> generate(const ProblemSpec& spec);

/// Writes A0.mtx .. AN.mtx and u0.mtx into `dir`; returns the paths, u0 last.
template <ScalarField S>
std::vector<std::filesystem::path> write_problem(const Problem<S>& problem, const std::filesystem::path& dir);

Problem<Complex> to_complex(const Problem<Real>& p);

}  // namespace paramexpmv
