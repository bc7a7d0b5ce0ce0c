#pragma once

#include "apc/empirical_data.hpp"
#include "apc/rng.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace apc {

/// A pmf carried on equispaced points of [-1, 1] ("emulated" discrete law).
struct GridMarginal {
  std::vector<double> atoms;
  std::vector<double> weights;  ///< renormalized to sum to one
  double truncated_mass = 0.0;  ///< pmf mass dropped before renormalizing
  std::string label;
};

/// Binomial(n, p) pmf at k = 0..points-1 placed on `points` equispaced nodes.
GridMarginal binomial_grid(int trials, double p, int points);

/// Poisson(rate) pmf at k = 0..points-1 placed on `points` equispaced nodes.
GridMarginal poisson_grid(double rate, int points);

struct UniformComponent {
  double lo = -1.0;
  double hi = 1.0;
};

/// N(mean, sd^2) conditioned on [lo, hi].
struct TruncatedNormalComponent {
  double mean = 0.0;
  double sd = 1.0;
  double lo = -1.0;
  double hi = 1.0;
};

/// exp(N(mu, sigma^2)) conditioned on [lo, hi].
struct TruncatedLognormalComponent {
  double mu = 0.0;
  double sigma = 1.0;
  double lo = 0.0;
  double hi = 1.0;
};

using MixtureComponent = std::variant<UniformComponent, TruncatedNormalComponent, TruncatedLognormalComponent>;

struct MixtureMarginal {
  std::vector<MixtureComponent> components;
  std::vector<double> weights;
  std::string label;
};

/// Equal-weight mixture of U[-1,1], N(0.2, 1.5^2) truncated to [-1,1] and
/// lognormal(0,1) truncated to [0,1].
MixtureMarginal standard_mixture();

using MarginalSpec = std::variant<GridMarginal, MixtureMarginal>;

double draw(const MarginalSpec& marginal, Rng& rng);
std::string describe(const MarginalSpec& marginal);

/// A product law over independent marginals, or the empirical law of a fixed
/// sample set. Provides both the training sample set S and fresh iid draws
/// from the "true" distribution for validation.
class Distribution {
 public:
  /// Independent marginals. When every marginal is a grid, the sample set is
  /// the full tensor grid with product weights; otherwise it is
  /// `sample_count` iid draws with uniform weights.
  Distribution(std::vector<MarginalSpec> marginals, Eigen::Index sample_count);

  /// The weighted empirical measure of `samples`.
  explicit Distribution(SampleSet samples);

  int dim() const;

  SampleSet make_sample_set(std::uint64_t seed) const;

  /// `count` iid points (rows).
  Eigen::MatrixXd draw(Eigen::Index count, std::uint64_t seed) const;

  std::string describe() const;

 private:
  std::vector<MarginalSpec> marginals_;
  Eigen::Index sample_count_ = 0;
  std::shared_ptr<const SampleSet> empirical_;
};

/// Parse a distribution description: a comma-separated list of per-dimension
/// kinds `mixture`, `binomial(n,p[,points])`, `poisson(rate[,points])`, or
/// the alias `binomial-poisson` for binomial(24,0.5),poisson(10). A single kind
/// is replicated to `dim` dimensions.
std::vector<MarginalSpec> parse_marginals(const std::string& text, int dim);

}  // namespace apc
