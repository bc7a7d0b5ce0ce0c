// Basis pursuit as a linear program on the split c = u - v, u, v >= 0:
//   min 1^T u + 1^T v  s.t.  [A, -A] [u; v] = b,
// solved with a dense two-phase tableau simplex.

#include "apc/error.hpp"
#include "basis_pursuit_detail.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace apc::detail {

namespace {

constexpr double kPivotTol = 1e-10;
constexpr double kCostTol = 1e-10;
constexpr int kDegenerateStreakForBland = 50;

class Tableau {
 public:
  // Columns: structural [0, n), artificial [n, n+m), rhs n+m. Row m is the
  // reduced-cost row.
  Tableau(const Eigen::MatrixXd& a, const Eigen::VectorXd& b)
      : m_(a.rows()), n_(a.cols()), t_(Eigen::MatrixXd::Zero(a.rows() + 1, a.cols() + a.rows() + 1)), basis_(m_) {
    t_.topLeftCorner(m_, n_) = a;
    t_.block(0, n_, m_, m_).setIdentity();
    t_.col(rhs()).head(m_) = b;
    for (Eigen::Index i = 0; i < m_; ++i) basis_[static_cast<std::size_t>(i)] = n_ + i;
  }

  Eigen::Index rhs() const { return n_ + m_; }
  Eigen::Index rows() const { return m_; }
  bool is_artificial(Eigen::Index j) const { return j >= n_ && j < n_ + m_; }
  const std::vector<Eigen::Index>& basis() const { return basis_; }
  Eigen::MatrixXd& data() { return t_; }
  const Eigen::MatrixXd& data() const { return t_; }

  // Reduced costs for `cost` over all columns (artificials carry cost
  // `artificial_cost`), given the current basis.
  void price(const Eigen::VectorXd& cost, double artificial_cost) {
    auto column_cost = [&](Eigen::Index j) { return j < n_ ? cost[j] : artificial_cost; };
    t_.row(m_).setZero();
    for (Eigen::Index j = 0; j < n_ + m_; ++j) t_(m_, j) = column_cost(j);
    for (Eigen::Index i = 0; i < m_; ++i) {
      const double cb = column_cost(basis_[static_cast<std::size_t>(i)]);
      if (cb != 0.0) t_.row(m_) -= cb * t_.row(i);
    }
  }

  void pivot(Eigen::Index row, Eigen::Index col) {
    t_.row(row) /= t_(row, col);
    for (Eigen::Index i = 0; i <= m_; ++i) {
      if (i == row) continue;
      const double f = t_(i, col);
      if (f != 0.0) t_.row(i) -= f * t_.row(row);
    }
    basis_[static_cast<std::size_t>(row)] = col;
  }

  // Run simplex iterations; columns for which `allowed` is false never enter.
  // Returns false on unboundedness.
  template <typename Allowed>
  bool optimize(Allowed allowed, int max_iter, int& iterations) {
    int degenerate_streak = 0;
    while (iterations < max_iter) {
      const bool bland = degenerate_streak > kDegenerateStreakForBland;
      Eigen::Index enter = -1;
      double best = -kCostTol;
      for (Eigen::Index j = 0; j < n_ + m_; ++j) {
        if (!allowed(j)) continue;
        const double r = t_(m_, j);
        if (r < best) {
          enter = j;
          if (bland) break;
          best = r;
        }
      }
      if (enter < 0) return true;

      Eigen::Index leave = -1;
      double ratio = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < m_; ++i) {
        const double p = t_(i, enter);
        if (p <= kPivotTol) continue;
        const double q = t_(i, rhs()) / p;
        const bool better = leave < 0 || q < ratio - 1e-12;
        const bool tie = !better && q <= ratio + 1e-12 &&
                         basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(leave)];
        if (better || tie) {
          ratio = std::min(ratio, q);
          leave = i;
        }
      }
      if (leave < 0) return false;
      degenerate_streak = ratio <= 1e-12 ? degenerate_streak + 1 : 0;
      pivot(leave, enter);
      ++iterations;
    }
    return true;
  }

 private:
  Eigen::Index m_;
  Eigen::Index n_;
  Eigen::MatrixXd t_;
  std::vector<Eigen::Index> basis_;
};

}  // namespace

StandardFormResult simplex(const Eigen::MatrixXd& a_in, const Eigen::VectorXd& b_in, const Eigen::VectorXd& cost,
                           int max_iter, double feas_tol) {
  const Eigen::Index m = a_in.rows();
  const Eigen::Index n = a_in.cols();
  Eigen::MatrixXd a = a_in;
  Eigen::VectorXd b = b_in;
  Eigen::VectorXd flip = Eigen::VectorXd::Ones(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    if (b[i] < 0.0) {
      a.row(i) *= -1.0;
      b[i] = -b[i];
      flip[i] = -1.0;
    }
  }

  StandardFormResult result;
  Tableau tab(a, b);

  // Phase I: minimize the sum of artificials.
  tab.price(Eigen::VectorXd::Zero(n), 1.0);
  if (!tab.optimize([](Eigen::Index) { return true; }, max_iter, result.iterations)) {
    result.status = StandardFormResult::Status::unbounded;  // cannot happen in phase I
    return result;
  }
  if (result.iterations >= max_iter) return result;
  const double infeasibility = -tab.data()(m, tab.rhs());
  if (infeasibility > feas_tol * std::max(1.0, b.norm())) {
    result.status = StandardFormResult::Status::infeasible;
    return result;
  }

  // Drive remaining artificials out of the basis where possible; rows where
  // that fails are redundant and keep a zero-level artificial.
  for (Eigen::Index i = 0; i < m; ++i) {
    if (!tab.is_artificial(tab.basis()[static_cast<std::size_t>(i)])) continue;
    Eigen::Index col = -1;
    double best = kPivotTol;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (std::abs(tab.data()(i, j)) > best) {
        best = std::abs(tab.data()(i, j));
        col = j;
      }
    }
    if (col >= 0) tab.pivot(i, col);
  }

  // Phase II on the true costs; artificials may not re-enter.
  tab.price(cost, 0.0);
  if (!tab.optimize([&](Eigen::Index j) { return !tab.is_artificial(j); }, max_iter, result.iterations)) {
    result.status = StandardFormResult::Status::unbounded;
    return result;
  }
  if (result.iterations >= max_iter) return result;

  // Re-solve the final basis against the original data for accuracy.
  const auto& basis = tab.basis();
  Eigen::MatrixXd bmat(m, m);
  Eigen::VectorXd cb(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::Index j = basis[static_cast<std::size_t>(i)];
    if (j < n) {
      bmat.col(i) = a.col(j);
      cb[i] = cost[j];
    } else {
      bmat.col(i) = Eigen::VectorXd::Unit(m, j - n);
      cb[i] = 0.0;
    }
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(bmat);
  result.x = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd y;
  if (lu.isInvertible()) {
    const Eigen::VectorXd xb = lu.solve(b);
    y = lu.transpose().solve(cb);
    for (Eigen::Index i = 0; i < m; ++i) {
      const Eigen::Index j = basis[static_cast<std::size_t>(i)];
      if (j < n) result.x[j] = std::max(0.0, xb[i]);
    }
  } else {
    for (Eigen::Index i = 0; i < m; ++i) {
      const Eigen::Index j = basis[static_cast<std::size_t>(i)];
      if (j < n) result.x[j] = std::max(0.0, tab.data()(i, tab.rhs()));
    }
    // Reduced cost of artificial k is -y_k.
    y = -tab.data().row(m).segment(n, m).transpose();
  }
  result.y = y.cwiseProduct(flip);
  result.status = StandardFormResult::Status::optimal;
  return result;
}

SparseSolution solve_lp(const PreparedSystem& sys, const SolverOptions& options) {
  const Eigen::MatrixXd& a = sys.matrix;
  const Eigen::Index m = a.rows();
  const Eigen::Index n = a.cols();
  Eigen::MatrixXd split(m, 2 * n);
  split << a, -a;
  const Eigen::VectorXd cost = Eigen::VectorXd::Ones(2 * n);

  const auto lp = simplex(split, sys.data, cost, options.max_iter, options.feas_tol);
  SparseSolution out;
  if (lp.status == StandardFormResult::Status::infeasible) {
    throw InfeasibleError("basis pursuit LP is infeasible", std::numeric_limits<double>::quiet_NaN());
  }
  if (lp.status != StandardFormResult::Status::optimal) {
    // Iteration limit: fall back to the minimum-norm feasible point.
    certify(sys, sys.particular, Eigen::VectorXd::Zero(m), options, out);
    out.iterations = lp.iterations;
    out.converged = false;
    return out;
  }
  Eigen::VectorXd c = lp.x.head(n) - lp.x.tail(n);
  certify(sys, std::move(c), lp.y, options, out);
  out.iterations = lp.iterations;
  return out;
}

}  // namespace apc::detail
