#include "apc/distributions.hpp"

#include "apc/error.hpp"
#include "apc/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <sstream>

namespace apc {

namespace {

std::vector<double> equispaced(int points) {
  std::vector<double> x(static_cast<std::size_t>(points));
  for (int k = 0; k < points; ++k) x[static_cast<std::size_t>(k)] = -1.0 + 2.0 * k / (points - 1);
  return x;
}

GridMarginal finish_grid(std::vector<double> pmf, std::string label) {
  GridMarginal g;
  g.atoms = equispaced(static_cast<int>(pmf.size()));
  const double kept = std::accumulate(pmf.begin(), pmf.end(), 0.0);
  g.truncated_mass = std::max(0.0, 1.0 - kept);
  for (double& w : pmf) w /= kept;
  g.weights = std::move(pmf);
  g.label = std::move(label);
  return g;
}

template <typename Accept>
double rejection(Accept propose) {
  constexpr int kMaxAttempts = 1'000'000;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    if (const auto x = propose(); x) return *x;
  }
  throw Error("rejection sampler exceeded its attempt budget; truncation interval has negligible mass");
}

double draw_component(const MixtureComponent& component, Rng& rng) {
  return std::visit(
      [&](const auto& c) -> double {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, UniformComponent>) {
          return c.lo + (c.hi - c.lo) * rng.uniform();
        } else if constexpr (std::is_same_v<T, TruncatedNormalComponent>) {
          return rejection([&]() -> std::optional<double> {
            const double x = c.mean + c.sd * rng.normal();
            return x >= c.lo && x <= c.hi ? std::optional<double>(x) : std::nullopt;
          });
        } else {
          return rejection([&]() -> std::optional<double> {
            const double x = std::exp(c.mu + c.sigma * rng.normal());
            return x >= c.lo && x <= c.hi ? std::optional<double>(x) : std::nullopt;
          });
        }
      },
      component);
}

std::size_t pick(const std::vector<double>& weights, double u) {
  double running = 0.0;
  for (std::size_t j = 0; j < weights.size(); ++j) {
    running += weights[j];
    if (u < running) return j;
  }
  return weights.size() - 1;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string::npos) return {};
  return s.substr(first, s.find_last_not_of(" \t") - first + 1);
}

std::vector<double> parse_args(const std::string& item, const std::string& name) {
  const auto open = item.find('(');
  const auto close = item.rfind(')');
  if (open == std::string::npos || close == std::string::npos || close < open) {
    throw Error("malformed distribution '" + item + "': expected " + name + "(...)");
  }
  std::vector<double> args;
  std::stringstream ss(item.substr(open + 1, close - open - 1));
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      const std::string t = trim(tok);
      args.push_back(std::stod(t, &used));
      if (used != t.size()) throw std::invalid_argument(t);
    } catch (const std::logic_error&) {
      throw Error("malformed argument '" + tok + "' in distribution '" + item + "'");
    }
  }
  return args;
}

}  // namespace

GridMarginal binomial_grid(int trials, double p, int points) {
  if (trials < 1) throw Error("binomial trials must be >= 1");
  if (!(p > 0.0 && p < 1.0)) throw Error("binomial probability must lie in (0, 1)");
  if (points < 2 || points > trials + 1) throw Error("binomial grid needs 2 <= points <= n+1");
  std::vector<double> pmf(static_cast<std::size_t>(points));
  for (int k = 0; k < points; ++k) {
    const double log_choose = std::lgamma(trials + 1.0) - std::lgamma(k + 1.0) - std::lgamma(trials - k + 1.0);
    pmf[static_cast<std::size_t>(k)] = std::exp(log_choose + k * std::log(p) + (trials - k) * std::log1p(-p));
  }
  std::ostringstream label;
  label << "binomial(" << trials << "," << p << "," << points << ")";
  return finish_grid(std::move(pmf), label.str());
}

GridMarginal poisson_grid(double rate, int points) {
  if (!(rate > 0.0) || !std::isfinite(rate)) throw Error("poisson rate must be positive");
  if (points < 2) throw Error("poisson grid needs at least 2 points");
  std::vector<double> pmf(static_cast<std::size_t>(points));
  for (int k = 0; k < points; ++k) {
    pmf[static_cast<std::size_t>(k)] = std::exp(-rate + k * std::log(rate) - std::lgamma(k + 1.0));
  }
  std::ostringstream label;
  label << "poisson(" << rate << "," << points << ")";
  return finish_grid(std::move(pmf), label.str());
}

MixtureMarginal standard_mixture() {
  MixtureMarginal m;
  m.components = {UniformComponent{-1.0, 1.0}, TruncatedNormalComponent{0.2, 1.5, -1.0, 1.0},
                  TruncatedLognormalComponent{0.0, 1.0, 0.0, 1.0}};
  m.weights = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
  m.label = "mixture(uniform[-1,1], normal(0.2,1.5)|[-1,1], lognormal(0,1)|[0,1]; equal weights)";
  return m;
}

double draw(const MarginalSpec& marginal, Rng& rng) {
  return std::visit(
      [&](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, GridMarginal>) {
          return m.atoms[pick(m.weights, rng.uniform())];
        } else {
          const auto c = pick(m.weights, rng.uniform());
          return draw_component(m.components[c], rng);
        }
      },
      marginal);
}

std::string describe(const MarginalSpec& marginal) {
  return std::visit([](const auto& m) { return m.label; }, marginal);
}

Distribution::Distribution(std::vector<MarginalSpec> marginals, Eigen::Index sample_count)
    : marginals_(std::move(marginals)), sample_count_(sample_count) {
  if (marginals_.empty()) throw Error("distribution needs at least one marginal");
  for (const auto& m : marginals_) {
    if (const auto* mix = std::get_if<MixtureMarginal>(&m)) {
      if (mix->components.empty() || mix->components.size() != mix->weights.size()) {
        throw Error("mixture needs one weight per component");
      }
      const double total = std::accumulate(mix->weights.begin(), mix->weights.end(), 0.0);
      if (std::abs(total - 1.0) > 1e-12) throw Error("mixture weights must sum to 1");
      if (sample_count_ < 1) throw Error("sample count must be >= 1 for sampled distributions");
    }
  }
}

Distribution::Distribution(SampleSet samples) : empirical_(std::make_shared<const SampleSet>(std::move(samples))) {}

int Distribution::dim() const {
  return empirical_ ? static_cast<int>(empirical_->dim()) : static_cast<int>(marginals_.size());
}

SampleSet Distribution::make_sample_set(std::uint64_t seed) const {
  if (empirical_) return *empirical_;

  const bool all_grid = std::all_of(marginals_.begin(), marginals_.end(),
                                    [](const MarginalSpec& m) { return std::holds_alternative<GridMarginal>(m); });
  const auto d = static_cast<Eigen::Index>(marginals_.size());
  if (!all_grid) return SampleSet::uniform(draw(sample_count_, seed));

  // Full tensor grid, first coordinate varying slowest.
  Eigen::Index q = 1;
  for (const auto& m : marginals_) q *= static_cast<Eigen::Index>(std::get<GridMarginal>(m).atoms.size());
  Eigen::MatrixXd points(q, d);
  Eigen::VectorXd weights(q);
  for (Eigen::Index r = 0; r < q; ++r) {
    Eigen::Index rest = r;
    double w = 1.0;
    for (Eigen::Index i = d - 1; i >= 0; --i) {
      const auto& g = std::get<GridMarginal>(marginals_[static_cast<std::size_t>(i)]);
      const auto size = static_cast<Eigen::Index>(g.atoms.size());
      const auto k = static_cast<std::size_t>(rest % size);
      rest /= size;
      points(r, i) = g.atoms[k];
      w *= g.weights[k];
    }
    weights[r] = w;
  }
  return SampleSet(std::move(points), std::move(weights));
}

Eigen::MatrixXd Distribution::draw(Eigen::Index count, std::uint64_t seed) const {
  Rng rng(seed);
  if (empirical_) {
    const DiscreteDistribution table(
        std::vector<double>(empirical_->weights().data(), empirical_->weights().data() + empirical_->count()));
    Eigen::MatrixXd out(count, empirical_->dim());
    for (Eigen::Index r = 0; r < count; ++r) {
      out.row(r) = empirical_->point(static_cast<Eigen::Index>(table.index_for(rng.uniform())));
    }
    return out;
  }
  const auto d = static_cast<Eigen::Index>(marginals_.size());
  Eigen::MatrixXd out(count, d);
  for (Eigen::Index r = 0; r < count; ++r) {
    for (Eigen::Index i = 0; i < d; ++i) out(r, i) = apc::draw(marginals_[static_cast<std::size_t>(i)], rng);
  }
  return out;
}

std::string Distribution::describe() const {
  if (empirical_) return "empirical(Q=" + std::to_string(empirical_->count()) + ")";
  std::string out;
  for (std::size_t i = 0; i < marginals_.size(); ++i) {
    if (i > 0) out += " x ";
    out += apc::describe(marginals_[i]);
  }
  return out;
}

std::vector<MarginalSpec> parse_marginals(const std::string& text, int dim) {
  if (dim < 1) throw Error("dimension must be >= 1");
  std::vector<std::string> items;
  int depth = 0;
  std::string current;
  for (char ch : text) {
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    if (ch == ',' && depth == 0) {
      items.push_back(trim(current));
      current.clear();
    } else {
      current += ch;
    }
  }
  items.push_back(trim(current));

  std::vector<MarginalSpec> out;
  for (const auto& item : items) {
    if (item == "mixture") {
      out.emplace_back(standard_mixture());
    } else if (item == "binomial-poisson") {
      out.emplace_back(binomial_grid(24, 0.5, 24));
      out.emplace_back(poisson_grid(10.0, 24));
    } else if (item.rfind("binomial", 0) == 0) {
      const auto args = parse_args(item, "binomial");
      if (args.size() < 2 || args.size() > 3) throw Error("binomial takes (n, p[, points])");
      const int n = static_cast<int>(args[0]);
      out.emplace_back(binomial_grid(n, args[1], args.size() == 3 ? static_cast<int>(args[2]) : n));
    } else if (item.rfind("poisson", 0) == 0) {
      const auto args = parse_args(item, "poisson");
      if (args.empty() || args.size() > 2) throw Error("poisson takes (rate[, points])");
      out.emplace_back(poisson_grid(args[0], args.size() == 2 ? static_cast<int>(args[1]) : 24));
    } else {
      throw Error("unknown distribution kind '" + item + "'");
    }
  }
  if (out.size() == 1 && dim > 1) out.assign(static_cast<std::size_t>(dim), out.front());
  if (static_cast<int>(out.size()) != dim) {
    throw Error("distribution '" + text + "' describes " + std::to_string(out.size()) + " dimensions, expected " +
                std::to_string(dim));
  }
  return out;
}

}  // namespace apc
