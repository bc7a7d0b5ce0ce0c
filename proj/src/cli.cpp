#include "apc/cli.hpp"

#include "apc/distributions.hpp"
#include "apc/error.hpp"
#include "apc/experiments.hpp"
#include "apc/io.hpp"
#include "apc/sampling.hpp"
#include "apc/sparse_solver.hpp"
#include "apc/tensor_basis.hpp"
#include "apc/test_functions.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#ifndef APC_VERSION
#define APC_VERSION "0.1.0"
#endif

namespace apc {

const char* version() { return APC_VERSION; }

namespace {

namespace fs = std::filesystem;

struct Options {
  std::string data;
  bool weighted = false;
  bool respect_weights = false;
  int degree = 10;
  int dim = 2;
  int sparsity = 4;
  int trials = 100;
  std::string samplers = "induced,mc";
  std::string sampler = "induced";
  std::string sample_counts = "20:10:120";
  std::uint64_t seed = 1;
  std::string dist = "mixture";
  long long sample_set_size = 10000;
  std::string function = "f1";
  long long validation_count = 10000;
  std::string values;
  std::string out = "-";
  std::string index_set;
  int threads = 0;
  double feas_tol = 1e-8;
  double opt_tol = 1e-6;
  int max_iter = 20000;
  std::string solver = "splitting";
};

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  return s.substr(first, s.find_last_not_of(" \t\r") - first + 1);
}

// Flat "key = value" file -> "--key=value" tokens. '#' starts a comment line.
std::vector<std::string> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file '" + path + "'");
  std::vector<std::string> tokens;
  std::string line;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(path + ":" + std::to_string(lineno) + ": expected 'key = value'");
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    while (!key.empty() && key.front() == '-') key.erase(0, 1);
    for (char& ch : key) {
      if (ch == '_') ch = '-';
    }
    if (key.empty()) throw Error(path + ":" + std::to_string(lineno) + ": empty key");
    tokens.push_back("--" + key + "=" + value);
  }
  return tokens;
}

// Config values are injected right after the subcommand name so that flags
// given on the command line come later and win (options keep the last value).
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::vector<std::string> rest;
  std::optional<std::string> config;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw Error("--config needs a file argument");
      config = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      config = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (!config) return rest;
  const auto injected = read_config(*config);
  std::vector<std::string> out;
  bool placed = false;
  for (const auto& a : rest) {
    out.push_back(a);
    if (!placed && !a.empty() && a[0] != '-') {
      out.insert(out.end(), injected.begin(), injected.end());
      placed = true;
    }
  }
  if (!placed) throw Error("--config given without a subcommand");
  return out;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

long long parse_count(const std::string& text) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(text, &used);
  } catch (const std::logic_error&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) throw Error("'" + text + "' is not an integer");
  return v;
}

// "start:step:stop" (inclusive) or a comma-separated list.
std::vector<Eigen::Index> parse_sample_counts(const std::string& text) {
  std::vector<Eigen::Index> out;
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ':')) parts.push_back(trim(part));
    if (parts.size() != 3) throw Error("M range must be start:step:stop, got '" + text + "'");
    const long long start = parse_count(parts[0]);
    const long long step = parse_count(parts[1]);
    const long long stop = parse_count(parts[2]);
    if (step < 1 || start < 1 || stop < start) throw Error("invalid M range '" + text + "'");
    for (long long m = start; m <= stop; m += step) out.push_back(static_cast<Eigen::Index>(m));
    return out;
  }
  for (const auto& item : split_list(text)) out.push_back(static_cast<Eigen::Index>(parse_count(item)));
  if (out.empty()) throw Error("empty M list");
  return out;
}

SolverOptions solver_options(const Options& o) {
  SolverOptions s;
  s.feas_tol = o.feas_tol;
  s.opt_tol = o.opt_tol;
  s.max_iter = o.max_iter;
  s.solver = parse_solver(o.solver);
  if (!(s.feas_tol > 0.0) || !(s.opt_tol > 0.0) || s.max_iter < 1) {
    throw Error("solver tolerances must be positive and max-iter >= 1");
  }
  return s;
}

nlohmann::json solver_json(const SolverOptions& s) {
  return {{"method", std::string(to_string(s.solver))},
          {"feas_tol", s.feas_tol},
          {"opt_tol", s.opt_tol},
          {"max_iter", s.max_iter}};
}

// Writes the CSV body to --out (or stdout) and, for files, a JSON sidecar
// next to it with the same stem.
template <typename Writer>
void emit(const Options& o, Writer write, nlohmann::json meta) {
  if (o.out == "-") {
    write(std::cout);
    return;
  }
  {
    std::ofstream csv(o.out, std::ios::binary);
    if (!csv) throw Error("cannot write '" + o.out + "'");
    write(csv);
  }
  meta["version"] = version();
  meta["output"] = fs::path(o.out).filename().string();
  fs::path sidecar(o.out);
  sidecar.replace_extension(".json");
  std::ofstream js(sidecar, std::ios::binary);
  if (!js) throw Error("cannot write '" + sidecar.string() + "'");
  js << meta.dump(2) << '\n';
}

void warn_conditioning(const TensorBasis& basis) {
  const auto& cond = basis.condition_estimates();
  for (std::size_t i = 0; i < cond.size(); ++i) {
    if (cond[i] > 1e12) {
      std::cerr << "warning: dimension " << i + 1 << ": moment matrix is ill-conditioned (estimate " << cond[i]
                << "); high-degree coefficients may be inaccurate\n";
    }
  }
}

MarginalWeights marginal_mode(const Options& o) {
  return o.respect_weights ? MarginalWeights::respect : MarginalWeights::uniform;
}

Distribution make_distribution(const Options& o, bool dim_given) {
  if (!o.data.empty()) {
    SampleSet s = load_sample_set(o.data, LoadOptions{o.weighted});
    if (dim_given && s.dim() != o.dim) {
      throw Error("--d " + std::to_string(o.dim) + " does not match the " + std::to_string(s.dim()) +
                  " columns of '" + o.data + "'");
    }
    return Distribution(std::move(s));
  }
  return Distribution(parse_marginals(o.dist, o.dim), static_cast<Eigen::Index>(o.sample_set_size));
}

SampleSet sample_set_for(const Options& o, bool dim_given) {
  if (!o.data.empty()) return make_distribution(o, dim_given).make_sample_set(0);
  return make_distribution(o, dim_given).make_sample_set(derive_seed(o.seed, {seed_stream::sample_set}));
}

SubsamplePlan make_plan(const Options& o, const TensorBasis& basis, const SampleSet& samples, Eigen::Index m) {
  const Sampler sampler = parse_sampler(o.sampler);
  const std::uint64_t seed = derive_seed(o.seed, {seed_stream::plan, static_cast<std::uint64_t>(sampler),
                                                   static_cast<std::uint64_t>(m), 0});
  switch (sampler) {
    case Sampler::induced:
      return draw_induced(induced_measure(basis, samples), m, seed);
    case Sampler::mc:
      return draw_mc(samples, m, seed);
    case Sampler::equilibrium:
      return draw_equilibrium(basis, bounding_box(samples), m, seed);
  }
  throw Error("unknown sampler");
}

Eigen::Index single_count(const Options& o) {
  const auto counts = parse_sample_counts(o.sample_counts);
  if (counts.size() != 1) throw Error("--M must be a single sample count for this command");
  if (counts[0] < 1) throw Error("--M must be positive");
  return counts[0];
}

void write_index_set_file(const Options& o, const MultiIndexSet& set) {
  if (o.index_set.empty()) return;
  std::ofstream f(o.index_set, std::ios::binary);
  if (!f) throw Error("cannot write '" + o.index_set + "'");
  write_index_set_csv(f, set);
}

int cmd_basis(const Options& o) {
  if (o.data.empty()) throw Error("basis needs --data");
  const SampleSet samples = load_sample_set(o.data, LoadOptions{o.weighted});
  const TensorBasis basis = build_tensor_basis(samples, o.degree, marginal_mode(o));
  warn_conditioning(basis);
  write_index_set_file(o, basis.index_set());
  nlohmann::json meta{{"command", "basis"},
                      {"data", o.data},
                      {"Q", samples.count()},
                      {"d", samples.dim()},
                      {"K", o.degree},
                      {"N", basis.size()},
                      {"marginal_weights", o.respect_weights ? "sample" : "uniform"},
                      {"cholesky_condition_estimates", basis.condition_estimates()}};
  emit(o, [&](std::ostream& os) { write_recurrence_csv(os, basis); }, meta);
  return 0;
}

int cmd_sample(const Options& o, bool dim_given) {
  const SampleSet samples = sample_set_for(o, dim_given);
  const TensorBasis basis = build_tensor_basis(samples, o.degree, marginal_mode(o));
  warn_conditioning(basis);
  const auto m = single_count(o);
  const auto plan = make_plan(o, basis, samples, m);
  nlohmann::json meta{{"command", "sample"},      {"sampler", std::string(to_string(plan.sampler))},
                      {"seed", o.seed},           {"plan_seed", plan.seed},
                      {"M", m},                   {"Q", samples.count()},
                      {"d", samples.dim()},       {"K", o.degree},
                      {"N", basis.size()}};
  if (o.data.empty()) meta["distribution"] = make_distribution(o, dim_given).describe();
  emit(o, [&](std::ostream& os) { write_plan_csv(os, plan); }, meta);
  return 0;
}

int cmd_fit(const Options& o, bool dim_given, bool function_given) {
  const SampleSet samples = sample_set_for(o, dim_given);
  const TensorBasis basis = build_tensor_basis(samples, o.degree, marginal_mode(o));
  warn_conditioning(basis);
  const auto m = single_count(o);
  const auto plan = make_plan(o, basis, samples, m);

  std::vector<double> b(static_cast<std::size_t>(plan.size()));
  if (!o.values.empty()) {
    if (function_given) throw Error("give either --values or --function, not both");
    const auto table = load_values(o.values);
    if (static_cast<Eigen::Index>(table.size()) != samples.count()) {
      throw Error("'" + o.values + "' has " + std::to_string(table.size()) + " values for " +
                  std::to_string(samples.count()) + " sample points");
    }
    for (Eigen::Index i = 0; i < plan.size(); ++i) {
      const long row = plan.source_rows[static_cast<std::size_t>(i)];
      if (row < 0) throw Error("tabulated values need plan points from the sample set (use induced or mc)");
      b[static_cast<std::size_t>(i)] = table[static_cast<std::size_t>(row)];
    }
  } else {
    const auto f = parse_test_function(o.function);
    for (Eigen::Index i = 0; i < plan.size(); ++i) {
      const Eigen::VectorXd z = plan.points.row(i).transpose();
      b[static_cast<std::size_t>(i)] = evaluate(f, std::span<const double>(z.data(), static_cast<std::size_t>(z.size())));
    }
  }

  SolverOptions opts = solver_options(o);
  opts.inconsistent = InconsistentData::project;
  const auto sys = assemble(basis, plan, b);
  const auto sol = solve_bp(sys, opts);
  if (!sol.converged) std::cerr << "warning: solver stopped before certifying optimality\n";
  write_index_set_file(o, basis.index_set());
  nlohmann::json meta{{"command", "fit"},
                      {"sampler", std::string(to_string(plan.sampler))},
                      {"seed", o.seed},
                      {"plan_seed", plan.seed},
                      {"M", m},
                      {"Q", samples.count()},
                      {"d", samples.dim()},
                      {"K", o.degree},
                      {"N", basis.size()},
                      {"source", o.values.empty() ? o.function : o.values},
                      {"solver", solver_json(opts)},
                      {"objective", sol.objective},
                      {"feasibility_residual", sol.feasibility_residual},
                      {"duality_gap", sol.duality_gap},
                      {"iterations", sol.iterations},
                      {"converged", sol.converged},
                      {"data_projected", sol.projected}};
  emit(o, [&](std::ostream& os) { write_coefficients_csv(os, basis.index_set(), sol.coefficients); }, meta);
  return 0;
}

ExperimentConfig experiment_config(const Options& o, const Distribution& dist) {
  ExperimentConfig cfg;
  cfg.dim = dist.dim();
  cfg.degree = o.degree;
  cfg.sparsity = o.sparsity;
  cfg.sample_counts = parse_sample_counts(o.sample_counts);
  cfg.trials = o.trials;
  cfg.samplers.clear();
  for (const auto& s : split_list(o.samplers)) cfg.samplers.push_back(parse_sampler(s));
  cfg.seed = o.seed;
  cfg.function = parse_test_function(o.function);
  cfg.validation_count = static_cast<Eigen::Index>(o.validation_count);
  cfg.solver = solver_options(o);
  cfg.threads = o.threads;
  cfg.validate();
  return cfg;
}

int cmd_experiment(const Options& o, bool dim_given, bool approx) {
  const Distribution dist = make_distribution(o, dim_given);
  const ExperimentConfig cfg = experiment_config(o, dist);
  const ResultTable table = approx ? approximation_experiment(cfg, dist) : recovery_experiment(cfg, dist);
  for (const auto& w : table.metadata["monotonicity_warnings"]) std::cerr << "note: " << w.get<std::string>() << '\n';
  if (!table.metadata["failures"].empty()) {
    std::cerr << "note: " << table.metadata["failures"].size() << " trial(s) failed; see the metadata sidecar\n";
  }
  nlohmann::json meta = table.metadata;
  meta["command"] = approx ? "approx" : "recover";
  meta["metric"] = table.metric;
  if (!o.data.empty()) meta["data"] = o.data;
  emit(o, [&](std::ostream& os) { write_results_csv(os, table); }, meta);
  return 0;
}

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--seed", o.seed, "Base RNG seed");
  cmd->add_option("--out", o.out, "Output CSV path ('-' for stdout; files get a .json sidecar)");
}

void add_data(CLI::App* cmd, Options& o) {
  cmd->add_option("--data", o.data, "Sample set CSV (one point per row)");
  cmd->add_flag("--weighted", o.weighted, "Last column of --data holds sample weights");
}

void add_synthetic(CLI::App* cmd, Options& o) {
  cmd->add_option("--d", o.dim, "Dimension of the synthetic distribution");
  cmd->add_option("--dist", o.dist,
                  "Synthetic distribution: mixture, binomial(n,p[,points]), poisson(rate[,points]), "
                  "binomial-poisson, or a comma-separated list per dimension");
  cmd->add_option("--Q", o.sample_set_size, "Sample-set size for sampled (non-grid) distributions");
}

void add_solver(CLI::App* cmd, Options& o) {
  cmd->add_option("--feas-tol", o.feas_tol, "Relative equality-constraint tolerance");
  cmd->add_option("--opt-tol", o.opt_tol, "Relative duality-gap tolerance");
  cmd->add_option("--max-iter", o.max_iter, "Iteration cap for the l1 solver");
  cmd->add_option("--solver", o.solver, "splitting | lp");
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  try {
    args = expand_config(args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }

  Options o;
  CLI::App app{"Arbitrary polynomial chaos from empirical data: bases, induced sampling, l1 surrogates", "apc"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(version()));
  app.footer("All subcommands also accept --config FILE with flat 'key = value' lines; command-line flags win.");

  auto* basis = app.add_subcommand("basis", "Emit per-dimension recurrence tables from a data file");
  add_data(basis, o);
  basis->add_flag("--respect-weights", o.respect_weights, "Use the sample weights for the marginals instead of 1/Q");
  basis->add_option("--K", o.degree, "Maximal polynomial degree")->required();
  basis->add_option("--index-set", o.index_set, "Also write the total-degree index set CSV here");
  add_common(basis, o);

  auto* sample = app.add_subcommand("sample", "Emit a subsample plan");
  add_data(sample, o);
  add_synthetic(sample, o);
  sample->add_flag("--respect-weights", o.respect_weights, "Use the sample weights for the marginals");
  sample->add_option("--K", o.degree, "Maximal polynomial degree");
  sample->add_option("--sampler", o.sampler, "induced | mc | equilibrium");
  sample->add_option("--M", o.sample_counts, "Number of subsamples")->required();
  add_common(sample, o);

  auto* fit = app.add_subcommand("fit", "Fit a sparse surrogate; emit coefficients with their multi-indices");
  add_data(fit, o);
  add_synthetic(fit, o);
  fit->add_flag("--respect-weights", o.respect_weights, "Use the sample weights for the marginals");
  fit->add_option("--values", o.values, "Function values, one per --data row");
  auto* fit_function = fit->add_option("--function", o.function, "Test function f1..f4 (when no --values)");
  fit->add_option("--K", o.degree, "Maximal polynomial degree");
  fit->add_option("--sampler", o.sampler, "induced | mc | equilibrium");
  fit->add_option("--M", o.sample_counts, "Number of subsamples")->required();
  fit->add_option("--index-set", o.index_set, "Also write the index set CSV here");
  add_solver(fit, o);
  add_common(fit, o);

  auto* recover = app.add_subcommand("recover", "Sparse-recovery probability per (sampler, M)");
  auto* approx = app.add_subcommand("approx", "Test-function approximation error per (sampler, M)");
  for (auto* cmd : {recover, approx}) {
    add_data(cmd, o);
    add_synthetic(cmd, o);
    cmd->add_option("--K", o.degree, "Maximal polynomial degree");
    cmd->add_option("--trials", o.trials, "Independent trials per (sampler, M)");
    cmd->add_option("--samplers", o.samplers, "Comma-separated samplers to compare");
    cmd->add_option("--M", o.sample_counts, "Sample counts: start:step:stop or a comma list");
    cmd->add_option("--threads", o.threads, "Worker threads (0 = all cores); results do not depend on it");
    add_solver(cmd, o);
    add_common(cmd, o);
  }
  recover->add_option("--s", o.sparsity, "Sparsity of the random coefficient vectors");
  approx->add_option("--function", o.function, "Test function f1..f4");
  approx->add_option("--E", o.validation_count, "Validation draws per trial");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    auto given = [](CLI::App* cmd, const char* name) { return cmd->count(name) > 0; };
    if (basis->parsed()) return cmd_basis(o);
    if (sample->parsed()) return cmd_sample(o, given(sample, "--d"));
    if (fit->parsed()) return cmd_fit(o, given(fit, "--d"), fit_function->count() > 0);
    if (recover->parsed()) return cmd_experiment(o, given(recover, "--d"), false);
    if (approx->parsed()) return cmd_experiment(o, given(approx, "--d"), true);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace apc
