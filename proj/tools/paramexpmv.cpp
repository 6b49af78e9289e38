#include "paramexpmv/matrix_market.hpp"
#include "paramexpmv/problems.hpp"
#include "paramexpmv/reference.hpp"
#include "paramexpmv/solver.hpp"

#include "CLI11.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace paramexpmv;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitUnconverged = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ProblemArgs {
  std::string problem;
  std::string manifest;
  Index n = 200;
  double a = 3e-4;
  double b = 2e2;
  Index points = 15;
  double gamma1 = 2.0;
};

struct ScalingArgs {
  std::optional<double> gamma;
  bool no_scaling = false;

  BuildOptions options() const {
    BuildOptions o;
    o.use_scaling = !no_scaling;
    o.gamma = gamma;
    return o;
  }
};

struct SolveArgs {
  ProblemArgs problem;
  ScalingArgs scaling;
  std::string t_list;
  std::string eps_list = "0";
  double tol = 1e-8;
  std::optional<int> p;
  int p_max = 200;
  int check_interval = 5;
  std::string out;
};

struct ConvergenceArgs {
  ProblemArgs problem;
  ScalingArgs scaling;
  double t = 0.0;
  std::string eps_list = "0";
  int p_max = 200;
  bool self_reference = false;
  std::string out;
};

struct GenerateArgs {
  ProblemArgs problem;
  std::string out;
};

double parse_double(std::string_view s, std::string_view what) {
  if (s.size() > 1 && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
    throw UsageError("cannot parse " + std::string(what) + " '" + std::string(s) + "'");
  return v;
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t");
  const auto e = s.find_last_not_of(" \t");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& list) {
  std::vector<std::string> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  if (out.empty()) throw UsageError("empty list");
  return out;
}

/// "1e-3", "2i", "0.5-1.5i", "-1e-2+3e-1i".
Complex parse_scalar(std::string s) {
  if (s.empty()) throw UsageError("empty eps value");
  if (s.back() != 'i') return parse_double(s, "eps");
  s.pop_back();
  std::size_t split = std::string::npos;
  for (std::size_t i = s.size(); i-- > 1;)
    if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
      split = i;
      break;
    }
  if (split == std::string::npos) {
    const std::string im = s.empty() || s == "+" || s == "-" ? s + "1" : s;
    return {0.0, parse_double(im, "eps")};
  }
  std::string im = s.substr(split);
  if (im == "+" || im == "-") im += "1";
  return {parse_double(s.substr(0, split), "eps"), parse_double(im, "eps")};
}

std::vector<double> parse_reals(const std::string& list, std::string_view what) {
  std::vector<double> v;
  for (const auto& item : split_list(list)) v.push_back(parse_double(item, what));
  return v;
}

std::vector<Complex> parse_eps(const std::string& list) {
  std::vector<Complex> v;
  for (const auto& item : split_list(list)) v.push_back(parse_scalar(item));
  return v;
}

bool any_imaginary(const std::vector<Complex>& v) {
  for (const auto& z : v)
    if (z.imag() != 0.0) return true;
  return false;
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

std::string num(Complex z) {
  if (z.imag() == 0.0) return num(z.real());
  char buf[80];
  std::snprintf(buf, sizeof buf, "%.16e%+.16ei", z.real(), z.imag());
  return buf;
}

template <ScalarField S>
S narrow(Complex z) {
  if constexpr (std::same_as<S, Complex>)
    return z;
  else
    return z.real();
}

ProblemSpec problem_spec(const ProblemArgs& args) {
  if (!args.manifest.empty()) {
    if (!args.problem.empty()) throw UsageError("give either --problem or --manifest, not both");
    return read_manifest(args.manifest);
  }
  if (args.problem.empty()) throw UsageError("a problem is required (--problem or --manifest)");
  ProblemSpec spec;
  spec.name = problem_kind_from_string(args.problem);
  spec.n = args.n;
  switch (spec.name) {
    case ProblemKind::advdiff1: spec.parameters = {{"a", args.a}}; break;
    case ProblemKind::advdiff2: spec.parameters = {{"a", args.a}, {"b", args.b}}; break;
    case ProblemKind::wave:
      spec.n = 2 * args.points * args.points * args.points;
      spec.parameters = {{"points", static_cast<double>(args.points)}, {"gamma1", args.gamma1}};
      break;
    case ProblemKind::file: throw UsageError("file problems are read through --manifest");
  }
  return spec;
}

bool spec_is_complex(const ProblemSpec& spec) { return !spec.paths.empty() && any_complex(spec.paths); }

template <ScalarField S>
Problem<S> load(const ProblemSpec& spec) {
  if constexpr (std::same_as<S, Complex>) {
    if (!spec.paths.empty()) {
      const std::span<const fs::path> all(spec.paths);
      return load_problem<Complex>(all.first(all.size() - 1), all.back());
    }
    return to_complex(generate(spec));
  } else {
    return generate(spec);
  }
}

std::ostream& open_output(const std::string& dir, const std::string& file, std::ofstream& stream) {
  if (dir.empty()) return std::cout;
  fs::create_directories(dir);
  stream.open(fs::path(dir) / file);
  if (!stream) throw std::runtime_error((fs::path(dir) / file).string() + ": cannot open for writing");
  return stream;
}

template <ScalarField S>
int run_solve(const SolveArgs& args, const ProblemSpec& spec, const std::vector<double>& ts,
              const std::vector<Complex>& eps_list) {
  const auto prob = load<S>(spec);
  std::vector<Target<S>> targets;
  for (double t : ts)
    for (const auto& e : eps_list) targets.push_back({t, narrow<S>(e)});

  std::optional<ParameterizedSolution<S>> solution;
  std::vector<ErrorReport<S>> reports;
  bool converged = true;
  if (args.p) {
    solution.emplace(build(prob.poly, prob.u0, *args.p, args.scaling.options()));
    for (const auto& tg : targets) reports.push_back(solution->error_report(tg.t, tg.eps));
  } else {
    AdaptiveOptions opts;
    opts.tol = args.tol;
    opts.p_max = args.p_max;
    opts.check_interval = args.check_interval;
    opts.build = args.scaling.options();
    auto result = solve_adaptive<S>(prob.poly, prob.u0, targets, opts);
    converged = result.converged;
    reports = std::move(result.reports);
    solution.emplace(std::move(result.solution));
  }

  std::ofstream file;
  std::ostream& out = open_output(args.out, "summary.csv", file);
  out << "t,eps,p_used,aposteriori_estimate,apriori_total\n";
  for (std::size_t i = 0; i < targets.size(); ++i) {
    out << num(targets[i].t) << ',' << num(Complex(targets[i].eps)) << ',' << solution->steps() << ','
        << num(reports[i].total_estimate) << ',' << num(reports[i].apriori_total) << '\n';
    if (!args.out.empty())
      write_matrix_market_vector(fs::path(args.out) / ("u_" + std::to_string(i) + ".mtx"),
                                 solution->evaluate(targets[i].t, targets[i].eps));
  }
  if (!converged) {
    std::cerr << "paramexpmv: tolerance " << args.tol << " not reached within " << args.p_max << " steps\n";
    return kExitUnconverged;
  }
  return 0;
}

void write_gnuplot(const fs::path& path, const std::vector<Complex>& eps_list) {
  std::ofstream gp(path);
  if (!gp) throw std::runtime_error(path.string() + ": cannot open for writing");
  gp << "set datafile separator ','\n"
        "set logscale y\n"
        "set format y '%.0e'\n"
        "set xlabel 'p'\n"
        "set ylabel '2-norm error'\n"
        "set key outside\n"
        "plot \\\n";
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    const std::string e = num(eps_list[i]);
    const std::string sel = "(strcol(2) eq '" + e + "' ? $";
    gp << "  'convergence.csv' every ::1 using 1:" << sel << "3 : 1/0) with lines title 'error eps=" << e
       << "', \\\n"
       << "  'convergence.csv' every ::1 using 1:" << sel << "4 : 1/0) with points title 'estimate eps=" << e
       << "'" << (i + 1 < eps_list.size() ? ", \\\n" : "\n");
  }
}

template <ScalarField S>
int run_convergence(const ConvergenceArgs& args, const ProblemSpec& spec, const std::vector<Complex>& eps_list) {
  const auto prob = load<S>(spec);
  if (args.p_max < 1) throw UsageError("--p-max must be positive");
  const Index cap = dense_cap();
  if (!args.self_reference && prob.poly.dim() > cap)
    throw UsageError("dimension " + std::to_string(prob.poly.dim()) + " exceeds the dense cap " +
                     std::to_string(cap) + "; use --self-reference");

  const int steps = args.p_max + (args.self_reference ? 10 : 0);
  const auto full = build(prob.poly, prob.u0, steps, args.scaling.options());
  std::vector<Vector<S>> refs;
  for (const auto& e : eps_list)
    refs.push_back(args.self_reference ? full.evaluate(args.t, narrow<S>(e))
                                       : dense_solution(prob.poly, prob.u0, args.t, narrow<S>(e), cap));

  std::ofstream file;
  std::ostream& out = open_output(args.out, "convergence.csv", file);
  out << "p,eps,true_error,aposteriori_estimate,apriori_total\n";
  const int last = std::min(args.p_max, full.steps());
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    const S eps = narrow<S>(eps_list[i]);
    for (int p = 1; p <= last; ++p) {
      const auto s = full.truncated(p);
      const auto rep = s.error_report(args.t, eps);
      const double err = (s.evaluate(args.t, eps) - refs[i]).norm();
      out << p << ',' << num(eps_list[i]) << ',' << num(err) << ',' << num(rep.total_estimate) << ','
          << num(rep.apriori_total) << '\n';
    }
  }
  if (!args.out.empty()) write_gnuplot(fs::path(args.out) / "convergence.gp", eps_list);
  return 0;
}

int cmd_solve(const SolveArgs& args) {
  const auto spec = problem_spec(args.problem);
  const auto ts = parse_reals(args.t_list, "t");
  for (double t : ts)
    if (t < 0) throw UsageError("t must be nonnegative");
  const auto eps = parse_eps(args.eps_list);
  if (args.p && *args.p < 1) throw UsageError("--p must be positive");
  if (any_imaginary(eps) || spec_is_complex(spec)) return run_solve<Complex>(args, spec, ts, eps);
  return run_solve<Real>(args, spec, ts, eps);
}

int cmd_convergence(const ConvergenceArgs& args) {
  const auto spec = problem_spec(args.problem);
  const auto eps = parse_eps(args.eps_list);
  if (any_imaginary(eps) || spec_is_complex(spec)) return run_convergence<Complex>(args, spec, eps);
  return run_convergence<Real>(args, spec, eps);
}

int cmd_generate(const GenerateArgs& args) {
  auto spec = problem_spec(args.problem);
  const auto prob = generate(spec);
  const fs::path dir = args.out;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error(dir.string() + ": " + ec.message());
  spec.n = prob.poly.dim();
  spec.paths.clear();
  for (const auto& p : write_problem(prob, dir)) spec.paths.push_back(p.filename());
  write_manifest(dir / "manifest.json", spec);
  std::cout << "wrote " << spec.paths.size() << " files and manifest.json to " << dir.string() << '\n';
  return 0;
}

void add_problem_options(CLI::App* cmd, ProblemArgs& p) {
  cmd->add_option("--problem", p.problem, "built-in problem: advdiff1, advdiff2, wave");
  cmd->add_option("--manifest", p.manifest, "JSON problem manifest");
  cmd->add_option("--n", p.n, "grid points for advdiff problems")->capture_default_str();
  cmd->add_option("--a", p.a, "diffusion coefficient")->capture_default_str();
  cmd->add_option("--b", p.b, "feedback coefficient (advdiff2)")->capture_default_str();
  cmd->add_option("--points", p.points, "points per dimension (wave)")->capture_default_str();
  cmd->add_option("--gamma1", p.gamma1, "damping on the first face (wave)")->capture_default_str();
}

void add_scaling_options(CLI::App* cmd, ScalingArgs& s) {
  cmd->add_option("--gamma", s.gamma, "scaling factor overriding the heuristic");
  cmd->add_flag("--no-scaling", s.no_scaling, "run on the unscaled polynomial");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parameterized matrix exponential action via infinite Arnoldi"};
  app.require_subcommand(1);

  SolveArgs solve;
  auto* s = app.add_subcommand("solve", "solve for a grid of (t, eps) values");
  add_problem_options(s, solve.problem);
  add_scaling_options(s, solve.scaling);
  s->add_option("--t", solve.t_list, "comma-separated times")->required();
  s->add_option("--eps", solve.eps_list, "comma-separated parameters, complex as re+imi")->capture_default_str();
  s->add_option("--tol", solve.tol, "target for the error estimate")->capture_default_str();
  s->add_option("--p", solve.p, "fixed number of Arnoldi steps (no adaptivity)");
  s->add_option("--p-max", solve.p_max, "step limit for the adaptive run")->capture_default_str();
  s->add_option("--check-interval", solve.check_interval, "steps between estimate checks")->capture_default_str();
  s->add_option("--out", solve.out, "directory for summary.csv and solution vectors");

  ConvergenceArgs conv;
  auto* c = app.add_subcommand("convergence", "error history for p = 1..p-max");
  add_problem_options(c, conv.problem);
  add_scaling_options(c, conv.scaling);
  c->add_option("--t", conv.t, "time")->required();
  c->add_option("--eps", conv.eps_list, "comma-separated parameters, complex as re+imi")->capture_default_str();
  c->add_option("--p-max", conv.p_max, "largest step count")->capture_default_str();
  c->add_flag("--self-reference", conv.self_reference, "use a run with p-max + 10 steps as the reference");
  c->add_option("--out", conv.out, "directory for convergence.csv and convergence.gp");

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "write a built-in problem as MatrixMarket files");
  add_problem_options(g, gen.problem);
  g->add_option("--out", gen.out, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (s->parsed()) return cmd_solve(solve);
    if (c->parsed()) return cmd_convergence(conv);
    return cmd_generate(gen);
  } catch (const std::exception& e) {
    std::cerr << "paramexpmv: " << e.what() << '\n';
    return kExitUsage;
  }
}
