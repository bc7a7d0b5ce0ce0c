#pragma once

#include "apc/empirical_data.hpp"
#include "apc/tensor_basis.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace apc {

enum class Sampler { induced, mc, equilibrium };

std::string_view to_string(Sampler sampler);
Sampler parse_sampler(std::string_view name);

/// Inverse-transform sampler over a finite list of probabilities.
class DiscreteDistribution {
 public:
  /// `weights` need not be normalized; they must be non-negative with a
  /// positive sum.
  explicit DiscreteDistribution(std::vector<double> weights);

  std::size_t size() const { return probabilities_.size(); }
  const std::vector<double>& probabilities() const { return probabilities_; }
  const std::vector<double>& cumulative() const { return cumulative_; }

  /// Index whose cumulative interval contains u in [0, 1).
  std::size_t index_for(double u) const;

 private:
  std::vector<double> probabilities_;
  std::vector<double> cumulative_;
};

/// The Christoffel-induced discrete measure supported on a sample set: atom j
/// has mass kappa(z_j) / sum_q kappa(z_q) for a uniformly weighted set, and
/// w_j kappa(z_j) / sum_q w_q kappa(z_q) when the atoms carry weights w.
class InducedDiscreteMeasure {
 public:
  InducedDiscreteMeasure(Eigen::MatrixXd atoms, std::vector<double> kappa,
                         const std::vector<double>& base_weights = {});

  const Eigen::MatrixXd& atoms() const { return atoms_; }
  /// kappa at every atom, i.e. the unnormalized masses.
  const std::vector<double>& kappa() const { return kappa_; }
  const std::vector<double>& probabilities() const { return table_.probabilities(); }
  const std::vector<double>& cumulative() const { return table_.cumulative(); }
  const DiscreteDistribution& table() const { return table_; }

 private:
  Eigen::MatrixXd atoms_;
  std::vector<double> kappa_;
  DiscreteDistribution table_;
};

/// M sample locations plus their preconditioning weights.
struct SubsamplePlan {
  Eigen::MatrixXd points;          ///< M x d
  Eigen::VectorXd weights;         ///< W_i; 1 for mc, 1/kappa(z_i) otherwise
  Sampler sampler = Sampler::induced;
  std::uint64_t seed = 0;
  std::vector<long> source_rows;   ///< row of the sample set, -1 for points not in it

  Eigen::Index size() const { return points.rows(); }
  int dim() const { return static_cast<int>(points.cols()); }
};

InducedDiscreteMeasure induced_measure(const TensorBasis& basis, const SampleSet& samples);

/// M iid draws (with replacement) from the induced measure.
SubsamplePlan draw_induced(const InducedDiscreteMeasure& measure, Eigen::Index count, std::uint64_t seed);

/// M iid draws from the sample set under its own weights, unpreconditioned.
SubsamplePlan draw_mc(const SampleSet& samples, Eigen::Index count, std::uint64_t seed);

/// M iid draws from the product arcsine (Chebyshev) density fitted to `bounds`,
/// with W_i = 1/kappa(z_i).
SubsamplePlan draw_equilibrium(const TensorBasis& basis, const std::vector<Interval>& bounds, Eigen::Index count,
                               std::uint64_t seed);

}  // namespace apc
