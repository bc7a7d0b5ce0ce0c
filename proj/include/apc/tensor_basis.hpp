#pragma once

#include "apc/empirical_data.hpp"
#include "apc/univariate_basis.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace apc {

using MultiIndex = std::vector<int>;

/// An ordered set of multi-indices in N_0^d. Position in the set is the scalar
/// basis index used by coefficient vectors and results files.
class MultiIndexSet {
 public:
  enum class Kind { total_degree, explicit_list };

  /// All lambda with |lambda|_1 <= degree, in graded lexicographic order:
  /// by total degree first, ties broken lexicographically (ascending).
  static MultiIndexSet total_degree(int dim, int degree);

  /// Arbitrary indices in the given order. Duplicates are rejected.
  static MultiIndexSet from_list(int dim, std::vector<MultiIndex> indices);

  std::size_t size() const { return indices_.size(); }
  int dim() const { return dim_; }
  /// Largest total degree present.
  int degree() const { return degree_; }
  Kind kind() const { return kind_; }

  const MultiIndex& operator[](std::size_t j) const { return indices_[j]; }
  const std::vector<MultiIndex>& indices() const { return indices_; }

  /// Largest component in coordinate i.
  int max_component(int i) const;

  std::optional<std::size_t> find(const MultiIndex& lambda) const;

  bool contains_zero() const;

 private:
  MultiIndexSet(int dim, int degree, Kind kind, std::vector<MultiIndex> indices)
      : dim_(dim), degree_(degree), kind_(kind), indices_(std::move(indices)) {}

  int dim_;
  int degree_;
  Kind kind_;
  std::vector<MultiIndex> indices_;
};

/// C(d+k, d); throws when the result exceeds the 1e7 guard.
std::size_t total_degree_size(int dim, int degree);

inline MultiIndexSet total_degree_set(int dim, int degree) { return MultiIndexSet::total_degree(dim, degree); }

/// Tensor-product orthonormal basis Phi_lambda(z) = prod_i phi^i_{lambda_i}(z_i).
class TensorBasis {
 public:
  TensorBasis(std::vector<RecurrenceCoefficients> per_dim, MultiIndexSet index_set,
              std::vector<double> condition_estimates = {});

  int dim() const { return index_set_.dim(); }
  std::size_t size() const { return index_set_.size(); }
  const MultiIndexSet& index_set() const { return index_set_; }
  const std::vector<RecurrenceCoefficients>& per_dim() const { return per_dim_; }

  /// Condition estimates of the per-dimension Cholesky factors (empty if the
  /// basis was not built from moments).
  const std::vector<double>& condition_estimates() const { return condition_estimates_; }

  /// Phi_0(z)..Phi_{N-1}(z) into `out`. One univariate recurrence sweep per
  /// coordinate.
  void evaluate(std::span<const double> z, std::span<double> out) const;
  Eigen::VectorXd evaluate(std::span<const double> z) const;

  /// Normalized Christoffel function kappa(z) = (1/N) sum_j Phi_j(z)^2.
  double christoffel(std::span<const double> z) const;

  /// Basis matrix with one row per point (rows of `points`).
  Eigen::MatrixXd evaluate_rows(const Eigen::MatrixXd& points) const;

 private:
  std::vector<RecurrenceCoefficients> per_dim_;
  MultiIndexSet index_set_;
  std::vector<double> condition_estimates_;
  std::vector<int> sweep_degree_;
};

/// Build one univariate family per coordinate from the uniformly weighted
/// marginals of `samples`, up to `degree`, and pair it with `index_set`.
/// Determinacy failures are rethrown with the offending dimension attached.
///
/// Marginal weights default to 1/Q. `MarginalWeights::respect` keeps the sample
/// weights instead, which is what a weighted tensor grid needs for the product
/// basis to be orthonormal under the grid's own measure.
TensorBasis build_tensor_basis(const SampleSet& samples, int degree, MultiIndexSet index_set,
                               MarginalWeights weights = MarginalWeights::uniform);

/// Total-degree convenience overload.
TensorBasis build_tensor_basis(const SampleSet& samples, int degree,
                               MarginalWeights weights = MarginalWeights::uniform);

}  // namespace apc
