#pragma once

#include "apc/sparse_solver.hpp"

#include <Eigen/Dense>

namespace apc::detail {

// Consistent equality system after the range check. `pinv` is the
// pseudoinverse of `matrix`; `particular` its minimum-norm solution.
struct PreparedSystem {
  Eigen::MatrixXd matrix;
  Eigen::VectorXd data;
  Eigen::MatrixXd pinv;
  Eigen::VectorXd particular;
  bool projected = false;
};

PreparedSystem prepare(const Eigen::MatrixXd& matrix, const Eigen::VectorXd& data, const SolverOptions& options);

// Fill objective, residual, gap and converged for coefficient vector c with
// candidate dual y. y is rescaled to be dual feasible before the gap is taken.
void certify(const PreparedSystem& sys, Eigen::VectorXd c, Eigen::VectorXd y, const SolverOptions& options,
             SparseSolution& out);

bool certified(const SparseSolution& s, const SolverOptions& options);

SparseSolution solve_splitting(const PreparedSystem& sys, const SolverOptions& options);
SparseSolution solve_lp(const PreparedSystem& sys, const SolverOptions& options);

// Dense two-phase simplex for min c^T x s.t. A x = b, x >= 0.
struct StandardFormResult {
  enum class Status { optimal, infeasible, unbounded, iteration_limit };
  Status status = Status::iteration_limit;
  Eigen::VectorXd x;
  Eigen::VectorXd y;  // equality duals: c - A^T y >= 0 at optimum
  int iterations = 0;
};

StandardFormResult simplex(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const Eigen::VectorXd& cost,
                           int max_iter, double feas_tol);

}  // namespace apc::detail
