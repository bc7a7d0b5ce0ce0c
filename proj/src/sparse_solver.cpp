#include "apc/sparse_solver.hpp"

#include "apc/error.hpp"
#include "basis_pursuit_detail.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace apc {

Eigen::MatrixXd MeasurementSystem::scaled_matrix() const {
  return weights.cwiseSqrt().asDiagonal() * matrix;
}

Eigen::VectorXd MeasurementSystem::scaled_data() const { return weights.cwiseSqrt().cwiseProduct(data); }

MeasurementSystem assemble(const TensorBasis& basis, const SubsamplePlan& plan, std::span<const double> values) {
  if (plan.dim() != basis.dim()) {
    throw Error("plan dimension " + std::to_string(plan.dim()) + " does not match basis dimension " +
                std::to_string(basis.dim()));
  }
  if (static_cast<Eigen::Index>(values.size()) != plan.size()) {
    throw Error("got " + std::to_string(values.size()) + " data values for " + std::to_string(plan.size()) +
                " sample points");
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) throw Error("non-finite data value at sample " + std::to_string(i + 1));
  }
  if (plan.weights.size() != plan.size() || (plan.weights.array() <= 0.0).any()) {
    throw Error("preconditioning weights must be positive, one per sample");
  }
  MeasurementSystem sys;
  sys.matrix = basis.evaluate_rows(plan.points);
  sys.data = Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
  sys.weights = plan.weights;
  sys.preconditioned = plan.sampler != Sampler::mc;
  return sys;
}

std::string_view to_string(SolverKind kind) { return kind == SolverKind::lp ? "lp" : "splitting"; }

SolverKind parse_solver(std::string_view name) {
  if (name == "splitting" || name == "admm") return SolverKind::splitting;
  if (name == "lp" || name == "simplex") return SolverKind::lp;
  throw Error("unknown solver '" + std::string(name) + "' (expected splitting or lp)");
}

namespace detail {

PreparedSystem prepare(const Eigen::MatrixXd& matrix, const Eigen::VectorXd& data, const SolverOptions& options) {
  if (matrix.rows() != data.size()) throw Error("matrix rows and data length differ");
  if (matrix.rows() < 1 || matrix.cols() < 1) throw Error("empty measurement system");
  if (!matrix.allFinite() || !data.allFinite()) throw Error("measurement system has non-finite entries");

  PreparedSystem sys;
  sys.matrix = matrix;
  sys.data = data;
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(matrix);
  sys.pinv = cod.pseudoInverse();
  sys.particular = sys.pinv * data;

  const Eigen::VectorXd fitted = matrix * sys.particular;
  const double residual = (fitted - data).norm() / std::max(1.0, data.norm());
  if (residual > options.feas_tol) {
    if (options.inconsistent == InconsistentData::fail) {
      throw InfeasibleError("equality constraints are inconsistent: relative least-squares residual " +
                                std::to_string(residual) + " exceeds feas_tol",
                            residual);
    }
    sys.data = fitted;
    sys.projected = true;
  }
  return sys;
}

void certify(const PreparedSystem& sys, Eigen::VectorXd c, Eigen::VectorXd y, const SolverOptions& options,
             SparseSolution& out) {
  const double gamma = (sys.matrix.transpose() * y).cwiseAbs().maxCoeff();
  if (gamma > 1.0) y /= gamma;
  out.objective = c.lpNorm<1>();
  out.feasibility_residual = (sys.matrix * c - sys.data).norm() / std::max(1.0, sys.data.norm());
  out.duality_gap = std::max(0.0, out.objective - sys.data.dot(y));
  out.coefficients = std::move(c);
  out.dual = std::move(y);
  out.projected = sys.projected;
  out.converged = certified(out, options);
}

bool certified(const SparseSolution& s, const SolverOptions& options) {
  return s.feasibility_residual <= options.feas_tol && s.duality_gap <= options.opt_tol * std::max(1.0, s.objective);
}

}  // namespace detail

SparseSolution basis_pursuit(const Eigen::MatrixXd& matrix, const Eigen::VectorXd& data,
                             const SolverOptions& options) {
  const auto sys = detail::prepare(matrix, data, options);
  return options.solver == SolverKind::lp ? detail::solve_lp(sys, options) : detail::solve_splitting(sys, options);
}

SparseSolution solve_bp(const MeasurementSystem& system, const SolverOptions& options) {
  if (system.weights.size() != system.rows() || (system.weights.array() <= 0.0).any()) {
    throw Error("measurement weights must be positive, one per row");
  }
  return basis_pursuit(system.scaled_matrix(), system.scaled_data(), options);
}

bool recover_success(const Eigen::VectorXd& c, const Eigen::VectorXd& c_star, double threshold) {
  if (c.size() != c_star.size()) throw Error("coefficient vectors differ in length");
  if (c.size() == 0) return true;
  if (!c.allFinite()) return false;
  return (c - c_star).cwiseAbs().maxCoeff() < threshold;
}

}  // namespace apc
