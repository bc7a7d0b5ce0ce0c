#include "apc/io.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <sstream>

using namespace apc;

namespace {

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST_CASE("numbers round-trip exactly") {
  for (double x : {0.0, 1.0, -2.5, 0.1, 1.0 / 3.0, 6.02214076e23, 5e-324, -1e-300}) {
    CHECK(std::strtod(format_number(x).c_str(), nullptr) == x);
  }
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(1.0) == "1");
  CHECK(format_number(NAN) == "nan");
  CHECK(format_number(-INFINITY) == "-inf");
}

TEST_CASE("recurrence table") {
  Eigen::MatrixXd pts(3, 2);
  pts << -1, 0, 0, 1, 1, 2;
  const auto tb = build_tensor_basis(SampleSet::uniform(pts), 2);
  std::ostringstream os;
  write_recurrence_csv(os, tb);
  const auto l = lines(os.str());
  REQUIRE(l.size() == 1 + 2 * 3);
  CHECK(l[0] == "dim,j,a,b");
  CHECK(l[1] == "1,0,,1");
  CHECK(l[4].rfind("2,0,,", 0) == 0);
  // second coordinate {0,1,2}: a_1 = 1
  CHECK(l[5].rfind("2,1,1,", 0) == 0);
}

TEST_CASE("index set and coefficient tables") {
  const auto set = total_degree_set(2, 1);
  std::ostringstream os;
  write_index_set_csv(os, set);
  CHECK(os.str() == "index,lambda_1,lambda_2\n0,0,0\n1,0,1\n2,1,0\n");

  std::ostringstream cs;
  write_coefficients_csv(cs, set, Eigen::Vector3d(0.5, 0, -2));
  CHECK(cs.str() == "index,coefficient,lambda_1,lambda_2\n0,0.5,0,0\n1,0,0,1\n2,-2,1,0\n");
}

TEST_CASE("plan table") {
  SubsamplePlan plan;
  plan.points = Eigen::MatrixXd(2, 2);
  plan.points << 0.25, -1, 1, 0.5;
  plan.weights = Eigen::Vector2d(2, 0.5);
  plan.source_rows = {7, -1};
  std::ostringstream os;
  write_plan_csv(os, plan);
  CHECK(os.str() == "row,z_1,z_2,W,source_row\n0,0.25,-1,2,7\n1,1,0.5,0.5,-1\n");
}

TEST_CASE("results table") {
  ResultTable t;
  t.metric = "success_rate";
  t.rows.push_back({Sampler::induced, 20, 0.75, 0.125, 4, 0, 0});
  t.rows.push_back({Sampler::mc, 20, 0.5, 0.25, 4, 0, 0});
  std::ostringstream os;
  write_results_csv(os, t);
  CHECK(os.str() == "sampler,M,metric,stderr,trials\ninduced,20,0.75,0.125,4\nmc,20,0.5,0.25,4\n");
}
