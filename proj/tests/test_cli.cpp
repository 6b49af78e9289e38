#include "doctest.h"

#include "paramexpmv/problems.hpp"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

using namespace paramexpmv;
namespace fs = std::filesystem;

namespace {

const fs::path work = fs::temp_directory_path() / "paramexpmv_test_cli";

int run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " PARAMEXPMV_CLI " " + args + " > " + (work / "stdout.txt").string() + " 2> " +
                          (work / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int count_lines(const std::string& s) {
  int n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

struct Workdir {
  Workdir() {
    fs::remove_all(work);
    fs::create_directories(work);
  }
};

}  // namespace

TEST_CASE_FIXTURE(Workdir, "usage errors exit with 2") {
  CHECK(run("solve --problem advdiff1 --eps 1e-3") == 2);
  CHECK(slurp(work / "stderr.txt").find("--t") != std::string::npos);
  CHECK(run("solve --problem heat --t 1") == 2);
  CHECK(run("solve --problem advdiff1 --t 0.5 --eps 1e-3x") == 2);
  CHECK(run("solve --t 0.5") == 2);
  CHECK(run("") == 2);
  CHECK(run("generate --problem advdiff1 --n 10 --out /proc/forbidden/dir") == 2);
}

TEST_CASE_FIXTURE(Workdir, "solve writes one row per target") {
  REQUIRE(run("solve --problem advdiff1 --n 200 --a 3e-4 --t 0.5 --eps 1e-3,1.5e-2,3e-2 --tol 1e-8") == 0);
  const auto csv = slurp(work / "stdout.txt");
  CHECK(csv.rfind("t,eps,p_used,aposteriori_estimate,apriori_total\n", 0) == 0);
  CHECK(count_lines(csv) == 4);
  CHECK(csv.find("5.0000000000000000e-01,1.0000000000000000e-03,") != std::string::npos);

  CHECK(run("solve --problem advdiff1 --n 50 --t 0.5 --eps 3e-2 --tol 1e-14 --p-max 4") == 3);
  CHECK(run("solve --problem advdiff1 --n 30 --t 0.1,0.5 --eps 0.01+0.02i,-2i --p 20") == 0);
  CHECK(count_lines(slurp(work / "stdout.txt")) == 5);
  CHECK(slurp(work / "stdout.txt").find("+2.0000000000000000e-02i") != std::string::npos);
}

TEST_CASE_FIXTURE(Workdir, "output is deterministic") {
  const std::string args = "solve --problem advdiff2 --n 40 --a 1e-3 --b 50 --t 0.3,0.6 --eps 0,1e-2 --tol 1e-9 --out ";
  REQUIRE(run(args + (work / "a").string()) == 0);
  REQUIRE(run(args + (work / "b").string()) == 0);
  CHECK(slurp(work / "a" / "summary.csv") == slurp(work / "b" / "summary.csv"));
  CHECK(slurp(work / "a" / "u_3.mtx") == slurp(work / "b" / "u_3.mtx"));
  CHECK(count_lines(slurp(work / "a" / "summary.csv")) == 5);
}

TEST_CASE_FIXTURE(Workdir, "generate then solve from the manifest") {
  const auto dir = work / "gen";
  REQUIRE(run("generate --problem advdiff2 --n 60 --a 3e-4 --b 2e2 --out " + dir.string()) == 0);
  for (const char* f : {"A0.mtx", "A1.mtx", "A2.mtx", "u0.mtx", "manifest.json"}) CHECK(fs::exists(dir / f));
  const auto loaded = generate(read_manifest(dir / "manifest.json"));
  const auto direct = gen_advdiff2(60, 3e-4, 2e2);
  for (int l = 0; l <= 2; ++l) CHECK(loaded.poly.coeff(l).to_dense() == direct.poly.coeff(l).to_dense());
  CHECK(loaded.u0 == direct.u0);

  REQUIRE(run("solve --manifest " + (dir / "manifest.json").string() + " --p 30 --t 0.5 --eps 0,1e-2") == 0);
  CHECK(count_lines(slurp(work / "stdout.txt")) == 3);

  REQUIRE(run("generate --problem wave --points 4 --gamma1 2 --out " + (work / "wave").string()) == 0);
  CHECK(read_manifest(work / "wave" / "manifest.json").n == 2 * 4 * 4 * 4);
  CHECK(fs::exists(work / "wave" / "A1.mtx"));
  CHECK_FALSE(fs::exists(work / "wave" / "A2.mtx"));
}

TEST_CASE_FIXTURE(Workdir, "convergence table and plot script") {
  const auto dir = work / "conv";
  REQUIRE(run("convergence --problem advdiff1 --n 100 --t 0.5 --eps 1e-3,3e-2 --p-max 30 --out " + dir.string()) == 0);
  const auto csv = slurp(dir / "convergence.csv");
  CHECK(csv.rfind("p,eps,true_error,aposteriori_estimate,apriori_total\n", 0) == 0);
  CHECK(count_lines(csv) == 61);
  const auto gp = slurp(dir / "convergence.gp");
  CHECK(gp.find("set logscale y") != std::string::npos);
  CHECK(gp.find("convergence.csv") != std::string::npos);

  // Above the dense cap a self-reference is required.
  CHECK(run("convergence --problem advdiff1 --n 40 --t 0.5 --eps 1e-2 --p-max 10", "PARAMEXPMV_DENSE_CAP=20") == 2);
  CHECK(run("convergence --problem advdiff1 --n 40 --t 0.5 --eps 1e-2 --p-max 10 --self-reference",
            "PARAMEXPMV_DENSE_CAP=20") == 0);
  CHECK(count_lines(slurp(work / "stdout.txt")) == 11);
}
