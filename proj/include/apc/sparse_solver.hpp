#pragma once

#include "apc/sampling.hpp"
#include "apc/tensor_basis.hpp"

#include <Eigen/Dense>

#include <span>
#include <string_view>

namespace apc {

/// A[i][j] = Phi_j(z_i), data b_i, and row weights W_i.
struct MeasurementSystem {
  Eigen::MatrixXd matrix;
  Eigen::VectorXd data;
  Eigen::VectorXd weights;
  bool preconditioned = false;

  Eigen::Index rows() const { return matrix.rows(); }
  Eigen::Index cols() const { return matrix.cols(); }

  /// sqrt(W) A and sqrt(W) b.
  Eigen::MatrixXd scaled_matrix() const;
  Eigen::VectorXd scaled_data() const;
};

MeasurementSystem assemble(const TensorBasis& basis, const SubsamplePlan& plan, std::span<const double> values);

enum class SolverKind { splitting, lp };

std::string_view to_string(SolverKind kind);
SolverKind parse_solver(std::string_view name);

/// What to do when b is not in the range of A.
enum class InconsistentData {
  fail,     ///< throw InfeasibleError
  project,  ///< replace b by its least-squares projection onto range(A)
};

struct SolverOptions {
  double feas_tol = 1e-8;
  double opt_tol = 1e-6;
  int max_iter = 20000;
  SolverKind solver = SolverKind::splitting;
  InconsistentData inconsistent = InconsistentData::fail;
};

struct SparseSolution {
  Eigen::VectorXd coefficients;
  /// Dual vector y of the (scaled) problem with ||A^T y||_inf <= 1, so b^T y
  /// is a lower bound on the optimal l1 norm.
  Eigen::VectorXd dual;
  double objective = 0.0;
  /// ||A c - b|| / max(1, ||b||) on the scaled system.
  double feasibility_residual = 0.0;
  /// objective - b^T y.
  double duality_gap = 0.0;
  int iterations = 0;
  bool converged = false;
  /// True when the data were replaced by their projection onto range(A).
  bool projected = false;
};

/// min ||c||_1 subject to sqrt(W) A c = sqrt(W) b.
///
/// converged means feasibility_residual <= feas_tol and
/// duality_gap <= opt_tol * max(1, ||c||_1). Hitting max_iter returns the last
/// feasible iterate with converged = false.
SparseSolution solve_bp(const MeasurementSystem& system, const SolverOptions& options = {});

/// Same problem on an explicit (already scaled) matrix.
SparseSolution basis_pursuit(const Eigen::MatrixXd& matrix, const Eigen::VectorXd& data,
                             const SolverOptions& options = {});

/// ||c - c_star||_inf < threshold.
bool recover_success(const Eigen::VectorXd& c, const Eigen::VectorXd& c_star, double threshold = 1e-3);

}  // namespace apc
