// ADMM for min ||x||_1 s.t. Ax = b, split as x (affine constraint) and z (l1),
// with periodic support polishing: once the soft-thresholded iterate exposes
// a support, solve the equality system on that support exactly and try to
// certify it with a dual vector built from the ADMM multiplier.

#include "basis_pursuit_detail.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace apc::detail {

namespace {

constexpr int kCheckEvery = 10;

Eigen::VectorXd soft_threshold(const Eigen::VectorXd& v, double t) {
  return v.unaryExpr([t](double x) { return x > t ? x - t : (x < -t ? x + t : 0.0); });
}

// Exact solve on the support of `z`; returns false when the support is not
// usable (too large, rank deficient, or infeasible).
bool polish(const PreparedSystem& sys, const Eigen::VectorXd& z, const Eigen::VectorXd& dual_guess,
            const SolverOptions& options, SparseSolution& out) {
  const Eigen::MatrixXd& a = sys.matrix;
  std::vector<Eigen::Index> support;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    if (z[i] != 0.0) support.push_back(i);
  }
  const auto k = static_cast<Eigen::Index>(support.size());
  if (k > a.rows()) return false;

  Eigen::VectorXd c = Eigen::VectorXd::Zero(a.cols());
  Eigen::VectorXd y = dual_guess;
  if (k > 0) {
    Eigen::MatrixXd sub(a.rows(), k);
    for (Eigen::Index j = 0; j < k; ++j) sub.col(j) = a.col(support[static_cast<std::size_t>(j)]);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(sub);
    if (qr.rank() < k) return false;
    const Eigen::VectorXd cs = qr.solve(sys.data);
    for (Eigen::Index j = 0; j < k; ++j) c[support[static_cast<std::size_t>(j)]] = cs[j];

    // Smallest correction of the dual guess with sub^T y = sign(c_S).
    const Eigen::VectorXd signs = cs.unaryExpr([](double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); });
    const Eigen::MatrixXd gram = sub.transpose() * sub;
    const Eigen::VectorXd w = gram.ldlt().solve(signs - sub.transpose() * y);
    y += sub * w;
  }
  SparseSolution candidate;
  certify(sys, std::move(c), std::move(y), options, candidate);
  if (!candidate.converged) return false;
  out = std::move(candidate);
  return true;
}

}  // namespace

SparseSolution solve_splitting(const PreparedSystem& sys, const SolverOptions& options) {
  const Eigen::MatrixXd& a = sys.matrix;
  const Eigen::VectorXd& b = sys.data;
  const Eigen::MatrixXd pinv_t = sys.pinv.transpose();

  auto project = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd { return v - sys.pinv * (a * v - b); };

  Eigen::VectorXd x = sys.particular;
  Eigen::VectorXd z = x;
  Eigen::VectorXd u = Eigen::VectorXd::Zero(x.size());

  const double scale = x.cwiseAbs().maxCoeff();
  SparseSolution best;
  if (!(scale > 0.0)) {
    // b = 0 (after projection): the origin is optimal.
    certify(sys, Eigen::VectorXd::Zero(a.cols()), Eigen::VectorXd::Zero(a.rows()), options, best);
    return best;
  }
  double rho = 1.0 / scale;

  int iter = 0;
  for (iter = 1; iter <= options.max_iter; ++iter) {
    x = project(z - u);
    const Eigen::VectorXd z_old = z;
    z = soft_threshold(x + u, 1.0 / rho);
    u += x - z;

    if (iter % kCheckEvery != 0) continue;

    const Eigen::VectorXd y_guess = pinv_t * (rho * u);
    if (polish(sys, z, y_guess, options, best)) {
      best.iterations = iter;
      return best;
    }
    SparseSolution plain;
    certify(sys, x, y_guess, options, plain);
    if (plain.converged) {
      plain.iterations = iter;
      return plain;
    }

    // Residual balancing.
    const double primal = (x - z).norm();
    const double dual = rho * (z - z_old).norm();
    if (primal > 10.0 * dual) {
      rho *= 2.0;
      u /= 2.0;
    } else if (dual > 10.0 * primal) {
      rho /= 2.0;
      u *= 2.0;
    }
  }

  certify(sys, project(z), pinv_t * (rho * u), options, best);
  best.iterations = options.max_iter;
  return best;
}

}  // namespace apc::detail
