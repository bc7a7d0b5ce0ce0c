#include "apc/experiments.hpp"

#include "apc/error.hpp"
#include "apc/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace apc {

namespace {

constexpr double kSuccessThreshold = 1e-3;

struct TaskOutcome {
  double value = std::numeric_limits<double>::quiet_NaN();
  bool failed = false;
  bool converged = true;
  std::string message;
};

struct Task {
  std::size_t sampler;
  std::size_t count;
  int trial;
};

// Runs fn(i) for i in [0, n) on a small pool. Each index writes only its own
// slot, so the outcome is independent of scheduling.
template <typename Fn>
void parallel_for(std::size_t n, int threads, Fn fn) {
  std::size_t workers = threads > 0 ? static_cast<std::size_t>(threads) : std::thread::hardware_concurrency();
  workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(n, 1));
  std::atomic<std::size_t> next{0};
  auto loop = [&] {
    for (std::size_t i = next++; i < n; i = next++) fn(i);
  };
  if (workers == 1) {
    loop();
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(loop);
  loop();
  for (auto& t : pool) t.join();
}

std::vector<Task> enumerate_tasks(const ExperimentConfig& config) {
  std::vector<Task> tasks;
  for (std::size_t s = 0; s < config.samplers.size(); ++s) {
    for (std::size_t m = 0; m < config.sample_counts.size(); ++m) {
      for (int t = 0; t < config.trials; ++t) tasks.push_back({s, m, t});
    }
  }
  return tasks;
}

// Everything that is shared, read-only, across the trials of one experiment.
struct Setup {
  SampleSet samples;
  TensorBasis basis;
  InducedDiscreteMeasure induced;
  std::vector<Interval> bounds;

  SubsamplePlan plan(Sampler sampler, Eigen::Index count, std::uint64_t seed) const {
    switch (sampler) {
      case Sampler::induced:
        return draw_induced(induced, count, seed);
      case Sampler::mc:
        return draw_mc(samples, count, seed);
      case Sampler::equilibrium:
        return draw_equilibrium(basis, bounds, count, seed);
    }
    throw Error("unknown sampler");
  }
};

Setup make_setup(const ExperimentConfig& config, const Distribution& distribution) {
  if (distribution.dim() != config.dim) {
    throw Error("distribution has dimension " + std::to_string(distribution.dim()) + ", config asks for " +
                std::to_string(config.dim));
  }
  SampleSet samples = distribution.make_sample_set(derive_seed(config.seed, {seed_stream::sample_set}));
  TensorBasis basis = build_tensor_basis(samples, config.degree, MarginalWeights::respect);
  InducedDiscreteMeasure induced = induced_measure(basis, samples);
  std::vector<Interval> bounds = bounding_box(samples);
  return Setup{std::move(samples), std::move(basis), std::move(induced), std::move(bounds)};
}

std::uint64_t plan_seed(const ExperimentConfig& config, Sampler sampler, Eigen::Index count, int trial) {
  return derive_seed(config.seed, {seed_stream::plan, static_cast<std::uint64_t>(sampler),
                                   static_cast<std::uint64_t>(count), static_cast<std::uint64_t>(trial)});
}

MeasurementSystem system_for(const Setup& setup, const SubsamplePlan& plan, Eigen::VectorXd data) {
  MeasurementSystem sys;
  sys.matrix = setup.basis.evaluate_rows(plan.points);
  sys.data = std::move(data);
  sys.weights = plan.weights;
  sys.preconditioned = plan.sampler != Sampler::mc;
  return sys;
}

Eigen::VectorXd sparse_vector(std::size_t size, int sparsity, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::size_t> order(size);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Eigen::VectorXd c = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(size));
  for (int k = 0; k < sparsity; ++k) {
    const auto pick = static_cast<std::size_t>(k) + static_cast<std::size_t>(rng.below(size - static_cast<std::size_t>(k)));
    std::swap(order[static_cast<std::size_t>(k)], order[pick]);
  }
  for (int k = 0; k < sparsity; ++k) c[static_cast<Eigen::Index>(order[static_cast<std::size_t>(k)])] = rng.normal();
  return c;
}

nlohmann::json base_metadata(const ExperimentConfig& config, const Distribution& distribution, const Setup& setup) {
  nlohmann::json meta;
  meta["seed"] = config.seed;
  meta["seed_derivation"] =
      "splitmix64 chain over (seed, stream, ...): sample set (1), coefficients (2, trial), "
      "plan (3, sampler, M, trial), validation (4, trial)";
  meta["d"] = config.dim;
  meta["K"] = config.degree;
  meta["N"] = setup.basis.size();
  meta["trials"] = config.trials;
  meta["M"] = config.sample_counts;
  std::vector<std::string> samplers;
  for (auto s : config.samplers) samplers.emplace_back(to_string(s));
  meta["samplers"] = samplers;
  meta["solver"] = {{"method", std::string(to_string(config.solver.solver))},
                    {"feas_tol", config.solver.feas_tol},
                    {"opt_tol", config.solver.opt_tol},
                    {"max_iter", config.solver.max_iter}};
  meta["distribution"] = distribution.describe();
  meta["sample_set_size"] = setup.samples.count();
  meta["cholesky_condition_estimates"] = setup.basis.condition_estimates();
  return meta;
}

ResultTable aggregate(const ExperimentConfig& config, const std::vector<Task>& tasks,
                      const std::vector<TaskOutcome>& outcomes, std::string metric, bool binomial_error) {
  ResultTable table;
  table.metric = std::move(metric);
  nlohmann::json failures = nlohmann::json::array();
  nlohmann::json warnings = nlohmann::json::array();

  std::size_t k = 0;
  for (std::size_t s = 0; s < config.samplers.size(); ++s) {
    for (std::size_t m = 0; m < config.sample_counts.size(); ++m) {
      ResultRow row;
      row.sampler = config.samplers[s];
      row.sample_count = config.sample_counts[m];
      std::vector<double> values;
      for (int t = 0; t < config.trials; ++t, ++k) {
        const auto& out = outcomes[k];
        if (out.failed) {
          ++row.failures;
          failures.push_back({{"sampler", std::string(to_string(row.sampler))},
                              {"M", row.sample_count},
                              {"trial", tasks[k].trial},
                              {"error", out.message}});
          // A failed solve is a failed recovery; for the error metric the
          // trial has no surrogate and is left out of the mean.
          if (binomial_error) values.push_back(0.0);
          continue;
        }
        if (!out.converged) ++row.unconverged;
        values.push_back(out.value);
      }
      row.trials = static_cast<int>(values.size());
      if (values.empty()) {
        row.metric = std::numeric_limits<double>::quiet_NaN();
        row.std_error = std::numeric_limits<double>::quiet_NaN();
      } else {
        const double n = static_cast<double>(values.size());
        double mean = 0.0;
        for (double v : values) mean += v;
        mean /= n;
        row.metric = mean;
        if (binomial_error) {
          row.std_error = std::sqrt(mean * (1.0 - mean) / n);
        } else if (values.size() > 1) {
          double ss = 0.0;
          for (double v : values) ss += (v - mean) * (v - mean);
          row.std_error = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
        }
      }
      table.rows.push_back(row);
    }
  }

  // Sanity flags, reported but never fatal: success should not drop with M,
  // errors should not grow with M, beyond two standard errors.
  for (std::size_t s = 0; s < config.samplers.size(); ++s) {
    for (std::size_t m = 1; m < config.sample_counts.size(); ++m) {
      const auto& prev = table.rows[s * config.sample_counts.size() + m - 1];
      const auto& cur = table.rows[s * config.sample_counts.size() + m];
      const double slack = 2.0 * std::hypot(prev.std_error, cur.std_error);
      const bool bad = binomial_error ? cur.metric < prev.metric - slack : cur.metric > prev.metric + slack;
      if (bad) {
        warnings.push_back(std::string(to_string(cur.sampler)) + ": metric not monotone between M=" +
                           std::to_string(prev.sample_count) + " and M=" + std::to_string(cur.sample_count));
      }
    }
  }
  table.metadata["failures"] = failures;
  table.metadata["monotonicity_warnings"] = warnings;
  return table;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (dim < 1) throw Error("d must be >= 1");
  if (degree < 0) throw Error("K must be >= 0");
  if (trials < 1) throw Error("trials must be >= 1");
  if (validation_count < 1) throw Error("E must be >= 1");
  if (samplers.empty()) throw Error("at least one sampler is required");
  if (sample_counts.empty()) throw Error("the M grid is empty");
  for (std::size_t i = 0; i < sample_counts.size(); ++i) {
    if (sample_counts[i] < 1) throw Error("M values must be positive");
    if (i > 0 && sample_counts[i] <= sample_counts[i - 1]) throw Error("M values must be strictly ascending");
  }
}

const ResultRow& ResultTable::at(Sampler sampler, Eigen::Index sample_count) const {
  for (const auto& row : rows) {
    if (row.sampler == sampler && row.sample_count == sample_count) return row;
  }
  throw std::out_of_range("no result row for sampler " + std::string(to_string(sampler)) + " at M=" +
                          std::to_string(sample_count));
}

double validation_rmse(const TensorBasis& basis, const Eigen::VectorXd& coefficients, TestFunction f,
                       const Eigen::MatrixXd& points) {
  if (points.rows() < 1) throw Error("validation set is empty");
  const Eigen::VectorXd surrogate = basis.evaluate_rows(points) * coefficients;
  double sum = 0.0;
  std::vector<double> z(static_cast<std::size_t>(points.cols()));
  for (Eigen::Index r = 0; r < points.rows(); ++r) {
    for (Eigen::Index i = 0; i < points.cols(); ++i) z[static_cast<std::size_t>(i)] = points(r, i);
    const double e = surrogate[r] - evaluate(f, z);
    sum += e * e;
  }
  return std::sqrt(sum / static_cast<double>(points.rows()));
}

ResultTable recovery_experiment(const ExperimentConfig& config, const Distribution& distribution) {
  config.validate();
  const Setup setup = make_setup(config, distribution);
  const std::size_t n = setup.basis.size();
  if (config.sparsity < 0 || static_cast<std::size_t>(config.sparsity) > n) {
    throw Error("sparsity s = " + std::to_string(config.sparsity) + " must lie in [0, N = " + std::to_string(n) + "]");
  }

  std::vector<Eigen::VectorXd> truths(static_cast<std::size_t>(config.trials));
  for (int t = 0; t < config.trials; ++t) {
    truths[static_cast<std::size_t>(t)] = sparse_vector(
        n, config.sparsity, derive_seed(config.seed, {seed_stream::coefficients, static_cast<std::uint64_t>(t)}));
  }

  const auto tasks = enumerate_tasks(config);
  std::vector<TaskOutcome> outcomes(tasks.size());
  parallel_for(tasks.size(), config.threads, [&](std::size_t i) {
    const Task& task = tasks[i];
    const Sampler sampler = config.samplers[task.sampler];
    const Eigen::Index m = config.sample_counts[task.count];
    auto& out = outcomes[i];
    try {
      const auto plan = setup.plan(sampler, m, plan_seed(config, sampler, m, task.trial));
      const auto& truth = truths[static_cast<std::size_t>(task.trial)];
      MeasurementSystem sys = system_for(setup, plan, Eigen::VectorXd());
      sys.data = sys.matrix * truth;
      const auto sol = solve_bp(sys, config.solver);
      out.converged = sol.converged;
      out.value = recover_success(sol.coefficients, truth, kSuccessThreshold) ? 1.0 : 0.0;
    } catch (const std::exception& e) {
      out.failed = true;
      out.message = e.what();
    }
  });

  ResultTable table = aggregate(config, tasks, outcomes, "success_rate", true);
  auto meta = base_metadata(config, distribution, setup);
  meta["experiment"] = "recovery";
  meta["s"] = config.sparsity;
  meta["success_criterion"] = "||c - c*||_inf < 1e-3";
  meta["coefficient_model"] = "support uniform without replacement, values standard normal";
  table.metadata.update(meta);
  return table;
}

ResultTable approximation_experiment(const ExperimentConfig& config, const Distribution& distribution) {
  config.validate();
  const Setup setup = make_setup(config, distribution);

  auto f_values = [&](const Eigen::MatrixXd& points, const char* where) {
    Eigen::VectorXd v(points.rows());
    std::vector<double> z(static_cast<std::size_t>(points.cols()));
    for (Eigen::Index r = 0; r < points.rows(); ++r) {
      for (Eigen::Index i = 0; i < points.cols(); ++i) z[static_cast<std::size_t>(i)] = points(r, i);
      v[r] = evaluate(config.function, z);
      if (!std::isfinite(v[r])) {
        throw Error(std::string(to_string(config.function)) + " is not finite at " + where + " point " +
                    std::to_string(r + 1));
      }
    }
    return v;
  };

  SolverOptions options = config.solver;
  options.inconsistent = InconsistentData::project;

  // One work item per trial: the validation set (E draws and their basis
  // matrix) is shared by every (sampler, M) of that trial.
  const auto tasks = enumerate_tasks(config);
  std::vector<TaskOutcome> outcomes(tasks.size());
  const auto trials = static_cast<std::size_t>(config.trials);
  parallel_for(trials, config.threads, [&](std::size_t trial) {
    Eigen::MatrixXd check_basis;
    Eigen::VectorXd check_values;
    std::string check_error;
    try {
      const Eigen::MatrixXd check = distribution.draw(
          config.validation_count, derive_seed(config.seed, {seed_stream::validation, static_cast<std::uint64_t>(trial)}));
      check_values = f_values(check, "validation");
      check_basis = setup.basis.evaluate_rows(check);
    } catch (const std::exception& e) {
      check_error = e.what();
    }
    for (std::size_t i = trial; i < tasks.size(); i += trials) {
      const Task& task = tasks[i];
      const Sampler sampler = config.samplers[task.sampler];
      const Eigen::Index m = config.sample_counts[task.count];
      auto& out = outcomes[i];
      try {
        if (!check_error.empty()) throw Error(check_error);
        const auto plan = setup.plan(sampler, m, plan_seed(config, sampler, m, task.trial));
        const auto sys = system_for(setup, plan, f_values(plan.points, "sample"));
        const auto sol = solve_bp(sys, options);
        out.converged = sol.converged;
        const Eigen::VectorXd residual = check_basis * sol.coefficients - check_values;
        out.value = std::sqrt(residual.squaredNorm() / static_cast<double>(config.validation_count));
      } catch (const std::exception& e) {
        out.failed = true;
        out.message = e.what();
      }
    }
  });

  ResultTable table = aggregate(config, tasks, outcomes, "mean_error", false);
  auto meta = base_metadata(config, distribution, setup);
  meta["experiment"] = "approximation";
  meta["function"] = std::string(to_string(config.function));
  meta["E"] = config.validation_count;
  meta["error_metric"] = "sqrt((1/E) sum_j (f_N - f)^2(z_j)) over E fresh iid draws";
  meta["inconsistent_data"] = "projected onto range(A) (least squares) before l1 minimization";
  table.metadata.update(meta);
  return table;
}

}  // namespace apc
