#include "apc/rng.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const fs::path& workdir() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / "apc_cli_test";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

int run(const std::string& args) {
  const std::string cmd = std::string(APC_EXE) + " " + args + " >" + (workdir() / "stdout.txt").string() + " 2>" +
                          (workdir() / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines(const fs::path& p) {
  std::vector<std::string> out;
  std::ifstream in(p);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::string path(const std::string& name) { return (workdir() / name).string(); }

void write_sample_files() {
  apc::Rng rng(1);
  std::ofstream s(path("S.csv")), y(path("y.csv"));
  s << "# two coordinates\n";
  for (int j = 0; j < 400; ++j) {
    const double a = rng.uniform() * 2 - 1, b = rng.uniform() * 2 - 1;
    s << a << ',' << b << '\n';
    y << 1.0 + a * b - 0.5 * b * b << '\n';
  }
}

}  // namespace

TEST_CASE("recover writes one row per sampler and M plus a sidecar") {
  REQUIRE(run("recover --d 2 --K 10 --s 4 --trials 100 --samplers induced,mc --M 20:10:120 --Q 2000 --out " +
              path("rec.csv")) == 0);
  const auto l = lines(workdir() / "rec.csv");
  REQUIRE(l.size() == 1 + 2 * 11);
  CHECK(l[0] == "sampler,M,metric,stderr,trials");
  CHECK(l[1].rfind("induced,20,", 0) == 0);
  CHECK(l[12].rfind("mc,20,", 0) == 0);
  CHECK(l[22].rfind("mc,120,", 0) == 0);

  const auto meta = nlohmann::json::parse(slurp(workdir() / "rec.json"));
  CHECK(meta["N"] == 66);
  CHECK(meta["seed"] == 1);
  CHECK(meta["solver"]["feas_tol"] == 1e-8);
  CHECK(meta["solver"]["opt_tol"] == 1e-6);
  CHECK(!meta["version"].get<std::string>().empty());
  CHECK(meta["command"] == "recover");
}

TEST_CASE("fit from tabulated data returns C(d+5, d) coefficients") {
  write_sample_files();
  REQUIRE(run("fit --data " + path("S.csv") + " --values " + path("y.csv") +
              " --K 5 --sampler induced --M 50 --out " + path("coef.csv")) == 0);
  const auto l = lines(workdir() / "coef.csv");
  REQUIRE(l.size() == 1 + 21);
  CHECK(l[0] == "index,coefficient,lambda_1,lambda_2");
  CHECK(l[1].rfind("0,", 0) == 0);
  const auto meta = nlohmann::json::parse(slurp(workdir() / "coef.json"));
  CHECK(meta["N"] == 21);
  CHECK(meta["converged"] == true);
}

TEST_CASE("same seed gives byte-identical CSV, also across thread counts") {
  const std::string base = "approx --dist binomial-poisson --d 2 --K 6 --trials 6 --M 10,28,40 --E 300 --seed 5 ";
  REQUIRE(run(base + "--threads 1 --out " + path("a1.csv")) == 0);
  REQUIRE(run(base + "--threads 3 --out " + path("a2.csv")) == 0);
  REQUIRE(run(base + "--out " + path("a3.csv")) == 0);
  CHECK(slurp(workdir() / "a1.csv") == slurp(workdir() / "a2.csv"));
  CHECK(slurp(workdir() / "a1.csv") == slurp(workdir() / "a3.csv"));
  REQUIRE(run(base + "--seed 6 --out " + path("a4.csv")) == 0);
  CHECK(slurp(workdir() / "a1.csv") != slurp(workdir() / "a4.csv"));
}

TEST_CASE("config file with command-line override") {
  {
    std::ofstream cfg(path("run.cfg"));
    cfg << "# experiment\nK = 3\ntrials = 4\nsamplers = induced\nM = 5,8\nQ = 500\ns = 9\n";
  }
  REQUIRE(run("recover --config " + path("run.cfg") + " --s 2 --out " + path("cfg.csv")) == 0);
  const auto l = lines(workdir() / "cfg.csv");
  CHECK(l.size() == 3);
  const auto meta = nlohmann::json::parse(slurp(workdir() / "cfg.json"));
  CHECK(meta["K"] == 3);
  CHECK(meta["s"] == 2);
  CHECK(meta["trials"] == 4);
}

TEST_CASE("basis and sample subcommands") {
  write_sample_files();
  REQUIRE(run("basis --data " + path("S.csv") + " --K 4 --index-set " + path("idx.csv") + " --out " +
              path("rc.csv")) == 0);
  const auto rc = lines(workdir() / "rc.csv");
  CHECK(rc.size() == 1 + 2 * 5);
  CHECK(rc[0] == "dim,j,a,b");
  CHECK(lines(workdir() / "idx.csv").size() == 1 + 15);

  REQUIRE(run("sample --data " + path("S.csv") + " --K 4 --sampler equilibrium --M 12 --out " + path("plan.csv")) == 0);
  const auto plan = lines(workdir() / "plan.csv");
  CHECK(plan.size() == 13);
  CHECK(plan[0] == "row,z_1,z_2,W,source_row");
  CHECK(plan[1].substr(plan[1].size() - 3) == ",-1");

  // Default output goes to stdout.
  REQUIRE(run("sample --dist mixture --d 1 --Q 300 --K 3 --M 4") == 0);
  CHECK(lines(workdir() / "stdout.txt").size() == 5);
}

TEST_CASE("errors exit nonzero with a message") {
  CHECK(run("recover --bogus-flag 1") != 0);
  CHECK(run("basis --data " + path("does-not-exist.csv") + " --K 2") != 0);
  CHECK(slurp(workdir() / "stderr.txt").find("error") != std::string::npos);
  CHECK(run("") != 0);
  CHECK(run("recover --samplers induced,lhs --trials 1 --M 5") != 0);
  CHECK(run("recover --M 10,5 --trials 1") != 0);
  CHECK(run("recover --config " + path("missing.cfg")) != 0);
  {
    std::ofstream s(path("two.csv"));
    s << "0\n1\n0\n";
  }
  CHECK(run("basis --data " + path("two.csv") + " --K 2") != 0);
  CHECK(slurp(workdir() / "stderr.txt").find("largest supported degree is 1") != std::string::npos);
  CHECK(run("--version") == 0);
}
