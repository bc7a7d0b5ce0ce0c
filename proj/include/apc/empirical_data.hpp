#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace apc {

/// A finite weighted point cloud in R^d. This is the only description of the
/// input distribution the rest of the library ever sees.
///
/// Invariants (checked on construction): Q >= 1, d >= 1, every coordinate is
/// finite, every weight is non-negative, and weights are renormalized to sum
/// to one.
class SampleSet {
 public:
  /// `points` is Q x d (one sample per row).
  SampleSet(Eigen::MatrixXd points, Eigen::VectorXd weights);

  /// Equal weights 1/Q.
  static SampleSet uniform(Eigen::MatrixXd points);

  Eigen::Index count() const { return points_.rows(); }
  Eigen::Index dim() const { return points_.cols(); }

  const Eigen::MatrixXd& points() const { return points_; }
  const Eigen::VectorXd& weights() const { return weights_; }

  auto point(Eigen::Index j) const { return points_.row(j); }

 private:
  Eigen::MatrixXd points_;
  Eigen::VectorXd weights_;
};

struct LoadOptions {
  /// Treat the last column of every row as the sample weight.
  bool weight_column = false;
};

/// Read a sample set from CSV. One point per line, comma separated, `#` lines
/// and blank lines ignored. Rows and columns in error messages are 1-based line
/// and field numbers of the file.
SampleSet load_sample_set(const std::filesystem::path& path, LoadOptions options = {});
SampleSet parse_sample_set(std::istream& in, LoadOptions options = {}, const std::string& source = "<input>");

/// Read a single column of values (one per non-comment line).
std::vector<double> load_values(const std::filesystem::path& path);

/// One coordinate slice of a sample set together with its weights.
struct UnivariateMarginal {
  std::vector<double> values;
  std::vector<double> weights;
};

enum class MarginalWeights {
  uniform,  ///< 1/Q for every atom, as used for tensorized bases
  respect,  ///< keep the weights of the parent sample set
};

/// Slice out coordinate `dim` (0-based) in sample order.
UnivariateMarginal marginalize(const SampleSet& samples, Eigen::Index dim,
                               MarginalWeights mode = MarginalWeights::uniform);

/// Raw moments nu_k = sum_j w_j x_j^k for k = 0..max_order.
///
/// Accumulated in extended precision with Neumaier compensation. nu_0 is set
/// to exactly one when the weights are probability weights.
std::vector<long double> raw_moments(const UnivariateMarginal& marginal, int max_order);

/// Number of distinct values carrying positive weight.
std::size_t count_distinct(const UnivariateMarginal& marginal);

struct Interval {
  double lo;
  double hi;
};

/// Per-coordinate [min, max] of a sample set.
std::vector<Interval> bounding_box(const SampleSet& samples);

}  // namespace apc
