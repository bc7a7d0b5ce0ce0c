#include "apc/error.hpp"
#include "apc/rng.hpp"
#include "apc/tensor_basis.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <set>

using namespace apc;

namespace {

std::size_t choose(int n, int k) {
  std::size_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::size_t>(n - k + i) / static_cast<std::size_t>(i);
  return r;
}

SampleSet tensor_grid(const std::vector<std::vector<double>>& axes) {
  Eigen::Index q = 1;
  for (const auto& a : axes) q *= static_cast<Eigen::Index>(a.size());
  Eigen::MatrixXd pts(q, static_cast<Eigen::Index>(axes.size()));
  for (Eigen::Index r = 0; r < q; ++r) {
    Eigen::Index rest = r;
    for (Eigen::Index i = static_cast<Eigen::Index>(axes.size()) - 1; i >= 0; --i) {
      const auto& a = axes[static_cast<std::size_t>(i)];
      pts(r, i) = a[static_cast<std::size_t>(rest % static_cast<Eigen::Index>(a.size()))];
      rest /= static_cast<Eigen::Index>(a.size());
    }
  }
  return SampleSet::uniform(pts);
}

std::vector<double> random_axis(Rng& rng, int q) {
  std::vector<double> a;
  for (int j = 0; j < q; ++j) a.push_back(rng.uniform() * 2.0 - 1.0);
  return a;
}

}  // namespace

TEST_CASE("total degree sizes") {
  CHECK(total_degree_set(2, 20).size() == 231);
  CHECK(total_degree_set(10, 3).size() == 286);
  CHECK(total_degree_size(2, 20) == 231);
  CHECK(total_degree_set(1, 0).size() == 1);
  for (int d = 1; d <= 5; ++d)
    for (int k = 0; k <= 6; ++k) CHECK(total_degree_set(d, k).size() == choose(d + k, d));
  CHECK_THROWS_AS(total_degree_size(30, 30), Error);
}

TEST_CASE("graded lexicographic order") {
  const auto set = total_degree_set(2, 1);
  REQUIRE(set.size() == 3);
  CHECK(set[0] == MultiIndex{0, 0});
  CHECK(set[1] == MultiIndex{0, 1});
  CHECK(set[2] == MultiIndex{1, 0});
  const auto two = total_degree_set(2, 2);
  CHECK(two[3] == MultiIndex{0, 2});
  CHECK(two[4] == MultiIndex{1, 1});
  CHECK(two[5] == MultiIndex{2, 0});
}

TEST_CASE("property: order is graded and downward closed") {
  for (int d = 1; d <= 4; ++d) {
    const auto set = total_degree_set(d, 5);
    std::set<MultiIndex> seen;
    for (std::size_t j = 0; j < set.size(); ++j) {
      const auto& lam = set[j];
      int grade = 0;
      for (int v : lam) grade += v;
      if (j > 0) {
        int prev = 0;
        for (int v : set[j - 1]) prev += v;
        CHECK((prev < grade || (prev == grade && set[j - 1] < lam)));
      }
      for (int i = 0; i < d; ++i) {
        if (lam[static_cast<std::size_t>(i)] == 0) continue;
        auto lower = lam;
        --lower[static_cast<std::size_t>(i)];
        CHECK(set.find(lower).has_value());
      }
      seen.insert(lam);
    }
    CHECK(seen.size() == set.size());
  }
}

TEST_CASE("explicit lists") {
  const auto set = MultiIndexSet::from_list(2, {{0, 0}, {3, 1}});
  CHECK(set.kind() == MultiIndexSet::Kind::explicit_list);
  CHECK(set.degree() == 4);
  CHECK(set.max_component(0) == 3);
  CHECK_THROWS_AS(MultiIndexSet::from_list(2, {{0, 0}, {0, 0}}), Error);
  CHECK_THROWS_AS(MultiIndexSet::from_list(2, {{0, 0, 1}}), Error);
  CHECK_THROWS_AS(MultiIndexSet::from_list(2, {{-1, 0}}), Error);
}

TEST_CASE("{-1,1}^2 grid basis") {
  const auto s = tensor_grid({{-1, 1}, {-1, 1}});
  const auto tb = build_tensor_basis(s, 1);
  for (const auto& rc : tb.per_dim()) {
    CHECK(std::abs(rc.a(1)) < 1e-15);
    CHECK(rc.b(1) == doctest::Approx(1.0).epsilon(1e-15));
  }
  const std::vector<double> z{1, 1};
  const auto phi = tb.evaluate(z);
  CHECK(phi.size() == 3);
  for (int j = 0; j < 3; ++j) CHECK(phi[j] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("constant index set") {
  const auto s = tensor_grid({{-1, 0, 1}, {0, 2}});
  const auto tb = build_tensor_basis(s, 1, MultiIndexSet::from_list(2, {{0, 0}}));
  const std::vector<double> z{0.3, 4.0};
  CHECK(tb.evaluate(z)[0] == doctest::Approx(1.0));
  CHECK(tb.christoffel(z) == doctest::Approx(1.0));
}

TEST_CASE("d=1 tensor basis equals the univariate construction") {
  const auto q = oracle::gauss_legendre(12);
  Eigen::MatrixXd pts(12, 1);
  for (int j = 0; j < 12; ++j) pts(j, 0) = q.nodes[static_cast<std::size_t>(j)];
  const auto tb = build_tensor_basis(SampleSet::uniform(pts), 5);
  const auto direct = build_univariate_basis(marginalize(SampleSet::uniform(pts), 0), 5);
  for (double x : {-0.9, 0.1, 0.77}) {
    const std::vector<double> z{x};
    const auto phi = tb.evaluate(z);
    const auto ref = evaluate_polynomials(direct, x, 5);
    for (int j = 0; j <= 5; ++j) CHECK(phi[j] == ref[static_cast<std::size_t>(j)]);
  }
}

TEST_CASE("Christoffel function on {-1,0,1}") {
  Eigen::MatrixXd pts(3, 1);
  pts << -1, 0, 1;
  const auto tb = build_tensor_basis(SampleSet::uniform(pts), 1);
  const std::vector<double> one{1.0}, zero{0.0};
  CHECK(tb.christoffel(one) == doctest::Approx(1.25).epsilon(1e-14));
  CHECK(tb.christoffel(zero) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("determinacy error names the dimension") {
  const auto s = tensor_grid({{-1, 0, 1}, {-1, 1}});
  try {
    build_tensor_basis(s, 2);
    FAIL("expected DeterminacyError");
  } catch (const DeterminacyError& e) {
    REQUIRE(e.dimension().has_value());
    CHECK(*e.dimension() == 1);
    CHECK(std::string(e.what()).find("dimension 2") != std::string::npos);
  }
  CHECK_THROWS_AS(build_tensor_basis(s, 1, MultiIndexSet::total_degree(3, 1)), Error);
}

TEST_CASE("property: separability") {
  Rng rng(12);
  const auto s = tensor_grid({random_axis(rng, 9), random_axis(rng, 11)});
  const auto tb = build_tensor_basis(s, 6);
  for (int t = 0; t < 20; ++t) {
    const std::vector<double> z{rng.normal(), rng.normal()};
    const auto phi = tb.evaluate(z);
    const auto u = evaluate_polynomials(tb.per_dim()[0], z[0], 6);
    const auto v = evaluate_polynomials(tb.per_dim()[1], z[1], 6);
    for (std::size_t j = 0; j < tb.size(); ++j) {
      const auto& lam = tb.index_set()[j];
      const double ref = u[static_cast<std::size_t>(lam[0])] * v[static_cast<std::size_t>(lam[1])];
      CHECK(std::abs(phi[static_cast<Eigen::Index>(j)] - ref) <= 1e-12 * std::max(1.0, std::abs(ref)));
    }
  }
}

TEST_CASE("property: multivariate orthonormality and mean-one Christoffel on tensor grids") {
  Rng rng(13);
  for (int q : {10, 20, 30}) {
    const auto s = tensor_grid({random_axis(rng, q), random_axis(rng, q)});
    const int k = std::min(8, q - 1);
    const auto tb = build_tensor_basis(s, k);
    const Eigen::MatrixXd a = tb.evaluate_rows(s.points());
    const Eigen::MatrixXd g = a.transpose() * a / static_cast<double>(s.count());
    CHECK((g - Eigen::MatrixXd::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff() < 1e-8);

    double mean = 0.0;
    for (Eigen::Index r = 0; r < s.count(); ++r) {
      const Eigen::VectorXd z = s.points().row(r).transpose();
      mean += tb.christoffel(std::span<const double>(z.data(), 2));
    }
    CHECK(std::abs(mean / static_cast<double>(s.count()) - 1.0) < 1e-8);
  }
}

TEST_CASE("property: weighted grids use weighted marginals when asked") {
  // Product weights on a 5x4 grid; with respect the product basis is
  // orthonormal under the weighted grid measure.
  Rng rng(14);
  const auto s0 = tensor_grid({random_axis(rng, 5), random_axis(rng, 4)});
  std::vector<double> u{0.1, 0.3, 0.2, 0.25, 0.15}, v{0.4, 0.1, 0.3, 0.2};
  Eigen::VectorXd w(20);
  for (int r = 0; r < 20; ++r) w[r] = u[static_cast<std::size_t>(r / 4)] * v[static_cast<std::size_t>(r % 4)];
  const SampleSet s(s0.points(), w);
  const auto tb = build_tensor_basis(s, 3, MarginalWeights::respect);
  const Eigen::MatrixXd a = tb.evaluate_rows(s.points());
  const Eigen::MatrixXd g = a.transpose() * w.asDiagonal() * a;
  CHECK((g - Eigen::MatrixXd::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("kappa is positive and rows equal single evaluations") {
  Rng rng(15);
  Eigen::MatrixXd pts(200, 3);
  for (Eigen::Index r = 0; r < 200; ++r)
    for (Eigen::Index c = 0; c < 3; ++c) pts(r, c) = rng.uniform();
  const auto tb = build_tensor_basis(SampleSet::uniform(pts), 4);
  const auto rows = tb.evaluate_rows(pts.topRows(5));
  for (Eigen::Index r = 0; r < 5; ++r) {
    const Eigen::VectorXd z = pts.row(r).transpose();
    const std::span<const double> zs(z.data(), 3);
    CHECK((rows.row(r).transpose() - tb.evaluate(zs)).norm() == 0.0);
    CHECK(tb.christoffel(zs) == doctest::Approx(rows.row(r).squaredNorm() / static_cast<double>(tb.size())));
    CHECK(tb.christoffel(zs) > 0.0);
  }
}
