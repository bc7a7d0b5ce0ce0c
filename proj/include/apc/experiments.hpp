#pragma once

#include "apc/distributions.hpp"
#include "apc/sampling.hpp"
#include "apc/sparse_solver.hpp"
#include "apc/test_functions.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace apc {

struct ExperimentConfig {
  int dim = 2;
  int degree = 10;
  int sparsity = 4;
  std::vector<Eigen::Index> sample_counts;  ///< M grid, positive and ascending
  int trials = 100;
  std::vector<Sampler> samplers{Sampler::induced, Sampler::mc};
  std::uint64_t seed = 1;
  TestFunction function = TestFunction::f1;
  Eigen::Index validation_count = 10000;  ///< E
  SolverOptions solver;
  /// Worker threads; 0 picks the hardware concurrency. Results do not depend
  /// on this value.
  int threads = 0;

  /// Throws apc::Error on T < 1, E < 1, empty / non-ascending M grid, etc.
  void validate() const;
};

struct ResultRow {
  Sampler sampler = Sampler::induced;
  Eigen::Index sample_count = 0;
  double metric = 0.0;  ///< success rate (recovery) or mean error (approximation)
  double std_error = 0.0;
  int trials = 0;       ///< trials that entered the aggregate
  int failures = 0;     ///< trials whose solve threw
  int unconverged = 0;  ///< trials whose solver stopped before certifying
};

struct ResultTable {
  std::string metric;  ///< "success_rate" or "mean_error"
  std::vector<ResultRow> rows;
  nlohmann::json metadata;

  /// The row for (sampler, M); throws std::out_of_range when absent.
  const ResultRow& at(Sampler sampler, Eigen::Index sample_count) const;
};

/// Sparse-recovery probability per (sampler, M): random s-sparse c* with
/// standard normal entries, b = A c*, success when ||c - c*||_inf < 1e-3.
ResultTable recovery_experiment(const ExperimentConfig& config, const Distribution& distribution);

/// Mean validation RMSE of the l1 surrogate of the configured test function,
/// measured on E fresh iid draws from `distribution` per trial.
ResultTable approximation_experiment(const ExperimentConfig& config, const Distribution& distribution);

/// sqrt((1/E) sum_j (f_N - f)^2(z_j)) over the rows z_j of `points`.
double validation_rmse(const TensorBasis& basis, const Eigen::VectorXd& coefficients, TestFunction f,
                       const Eigen::MatrixXd& points);

/// Seed streams shared by the experiments and the CLI so single-shot commands
/// can reproduce an experiment's sample set.
namespace seed_stream {
inline constexpr std::uint64_t sample_set = 1;
inline constexpr std::uint64_t coefficients = 2;
inline constexpr std::uint64_t plan = 3;
inline constexpr std::uint64_t validation = 4;
}  // namespace seed_stream

}  // namespace apc
