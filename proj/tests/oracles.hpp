// Independent reference computations for the tests. Nothing here calls into
// the library under test.
#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <utility>
#include <vector>

namespace oracle {

// Legendre P_n(x) and P_n'(x) by the classical three-term recurrence.
inline std::pair<double, double> legendre_with_derivative(int n, double x) {
  double p0 = 1.0, p1 = x;
  if (n == 0) return {1.0, 0.0};
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  const double dp = n * (x * p1 - p0) / (x * x - 1.0);
  return {p1, dp};
}

inline double legendre(int n, double x) {
  double p0 = 1.0, p1 = x;
  if (n == 0) return 1.0;
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

// Orthonormal under the uniform probability measure on [-1, 1].
inline double legendre_orthonormal(int n, double x) { return std::sqrt(2.0 * n + 1.0) * legendre(n, x); }

inline double legendre_b(int j) { return j / std::sqrt((2.0 * j - 1.0) * (2.0 * j + 1.0)); }

struct Quadrature {
  std::vector<double> nodes;
  std::vector<double> weights;  // sums to 1
};

// n-point Gauss-Legendre rule by Newton iteration on P_n, weights normalized
// to a probability measure.
inline Quadrature gauss_legendre(int n) {
  Quadrature q;
  q.nodes.resize(static_cast<std::size_t>(n));
  q.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      const auto [p, dp] = legendre_with_derivative(n, x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const auto [p, dp] = legendre_with_derivative(n, x);
    (void)p;
    q.nodes[static_cast<std::size_t>(i)] = x;
    q.weights[static_cast<std::size_t>(i)] = 1.0 / ((1.0 - x * x) * dp * dp);  // 2/(...) halved
  }
  return q;
}

// Exact basis pursuit by vertex enumeration: the optimum of
// min ||c||_1 s.t. A c = b is attained with support on m linearly independent
// columns, so minimize ||A_T^{-1} b||_1 over all m-subsets T.
inline double brute_force_l1(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
  const int m = static_cast<int>(a.rows());
  const int n = static_cast<int>(a.cols());
  std::vector<int> pick(static_cast<std::size_t>(m));
  std::iota(pick.begin(), pick.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  Eigen::MatrixXd sub(m, m);
  while (true) {
    for (int k = 0; k < m; ++k) sub.col(k) = a.col(pick[static_cast<std::size_t>(k)]);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(sub);
    if (std::abs(lu.determinant()) > 1e-12) {
      const Eigen::VectorXd x = lu.solve(b);
      if ((sub * x - b).norm() < 1e-9 * (1.0 + b.norm())) best = std::min(best, x.lpNorm<1>());
    }
    int k = m - 1;
    while (k >= 0 && pick[static_cast<std::size_t>(k)] == n - m + k) --k;
    if (k < 0) break;
    ++pick[static_cast<std::size_t>(k)];
    for (int j = k + 1; j < m; ++j) pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
  }
  return best;
}

// Arcsine law on (lo, hi).
inline double arcsine_cdf(double z, double lo, double hi) {
  const double t = std::clamp((2.0 * z - lo - hi) / (hi - lo), -1.0, 1.0);
  return 0.5 + std::asin(t) / std::numbers::pi;
}

// Upper 1% critical values of the chi-square distribution.
inline double chi_square_99(int dof) {
  static const double table[] = {0,     6.635, 9.210, 11.345, 13.277, 15.086, 16.812, 18.475, 20.090, 21.666, 23.209,
                                 24.725, 26.217, 27.688, 29.141, 30.578, 32.000, 33.409, 34.805, 36.191, 37.566};
  return table[dof];
}

}  // namespace oracle
