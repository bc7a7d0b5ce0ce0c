#include "apc/tensor_basis.hpp"

#include "apc/error.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <string>

namespace apc {

namespace {

constexpr std::size_t kMaxBasisSize = 10'000'000;

// Append every composition of `remaining` into the coordinates [pos, d) in
// lexicographically ascending order.
void compositions(MultiIndex& current, int pos, int remaining, std::vector<MultiIndex>& out) {
  const int d = static_cast<int>(current.size());
  if (pos == d - 1) {
    current[static_cast<std::size_t>(pos)] = remaining;
    out.push_back(current);
    return;
  }
  for (int v = 0; v <= remaining; ++v) {
    current[static_cast<std::size_t>(pos)] = v;
    compositions(current, pos + 1, remaining - v, out);
  }
}

}  // namespace

std::size_t total_degree_size(int dim, int degree) {
  if (dim < 1) throw Error("index set dimension must be >= 1");
  if (degree < 0) throw Error("index set degree must be >= 0");
  // C(d+k, k) built incrementally; every partial product is itself a binomial
  // coefficient, so the division is exact.
  std::size_t n = 1;
  for (int i = 1; i <= degree; ++i) {
    n = n * static_cast<std::size_t>(dim + i) / static_cast<std::size_t>(i);
    if (n > kMaxBasisSize) {
      throw Error("total degree set with d=" + std::to_string(dim) + ", k=" + std::to_string(degree) +
                  " exceeds the 1e7 basis size limit");
    }
  }
  return n;
}

MultiIndexSet MultiIndexSet::total_degree(int dim, int degree) {
  const std::size_t n = total_degree_size(dim, degree);
  std::vector<MultiIndex> indices;
  indices.reserve(n);
  MultiIndex current(static_cast<std::size_t>(dim), 0);
  for (int grade = 0; grade <= degree; ++grade) compositions(current, 0, grade, indices);
  return MultiIndexSet(dim, degree, Kind::total_degree, std::move(indices));
}

MultiIndexSet MultiIndexSet::from_list(int dim, std::vector<MultiIndex> indices) {
  if (dim < 1) throw Error("index set dimension must be >= 1");
  if (indices.empty()) throw Error("index set must not be empty");
  int degree = 0;
  std::set<MultiIndex> seen;
  for (const auto& lambda : indices) {
    if (lambda.size() != static_cast<std::size_t>(dim)) throw Error("multi-index has wrong dimension");
    if (std::any_of(lambda.begin(), lambda.end(), [](int v) { return v < 0; })) {
      throw Error("multi-index components must be non-negative");
    }
    if (!seen.insert(lambda).second) throw Error("duplicate multi-index in explicit list");
    degree = std::max(degree, std::accumulate(lambda.begin(), lambda.end(), 0));
  }
  return MultiIndexSet(dim, degree, Kind::explicit_list, std::move(indices));
}

int MultiIndexSet::max_component(int i) const {
  int m = 0;
  for (const auto& lambda : indices_) m = std::max(m, lambda[static_cast<std::size_t>(i)]);
  return m;
}

std::optional<std::size_t> MultiIndexSet::find(const MultiIndex& lambda) const {
  const auto it = std::find(indices_.begin(), indices_.end(), lambda);
  if (it == indices_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - indices_.begin());
}

bool MultiIndexSet::contains_zero() const { return find(MultiIndex(static_cast<std::size_t>(dim_), 0)).has_value(); }

TensorBasis::TensorBasis(std::vector<RecurrenceCoefficients> per_dim, MultiIndexSet index_set,
                         std::vector<double> condition_estimates)
    : per_dim_(std::move(per_dim)),
      index_set_(std::move(index_set)),
      condition_estimates_(std::move(condition_estimates)) {
  if (per_dim_.size() != static_cast<std::size_t>(index_set_.dim())) {
    throw Error("tensor basis needs one recurrence per dimension");
  }
  sweep_degree_.resize(per_dim_.size());
  for (int i = 0; i < index_set_.dim(); ++i) {
    const int need = index_set_.max_component(i);
    if (per_dim_[static_cast<std::size_t>(i)].max_degree() < need) {
      throw Error("recurrence for dimension " + std::to_string(i + 1) + " has degree " +
                  std::to_string(per_dim_[static_cast<std::size_t>(i)].max_degree()) + " but the index set needs " +
                  std::to_string(need));
    }
    sweep_degree_[static_cast<std::size_t>(i)] = need;
  }
}

void TensorBasis::evaluate(std::span<const double> z, std::span<double> out) const {
  const auto d = static_cast<std::size_t>(dim());
  if (z.size() != d) throw Error("evaluation point has dimension " + std::to_string(z.size()) + ", expected " +
                                 std::to_string(d));
  if (out.size() < size()) throw std::out_of_range("output span too short");

  // tables[i][l] = phi^i_l(z_i)
  std::vector<std::vector<double>> tables(d);
  for (std::size_t i = 0; i < d; ++i) {
    tables[i].resize(static_cast<std::size_t>(sweep_degree_[i]) + 1);
    per_dim_[i].evaluate(z[i], sweep_degree_[i], tables[i]);
  }
  const auto& indices = index_set_.indices();
  for (std::size_t j = 0; j < indices.size(); ++j) {
    double v = 1.0;
    for (std::size_t i = 0; i < d; ++i) v *= tables[i][static_cast<std::size_t>(indices[j][i])];
    out[j] = v;
  }
}

Eigen::VectorXd TensorBasis::evaluate(std::span<const double> z) const {
  Eigen::VectorXd out(static_cast<Eigen::Index>(size()));
  evaluate(z, std::span<double>(out.data(), size()));
  return out;
}

double TensorBasis::christoffel(std::span<const double> z) const {
  return evaluate(z).squaredNorm() / static_cast<double>(size());
}

Eigen::MatrixXd TensorBasis::evaluate_rows(const Eigen::MatrixXd& points) const {
  if (points.cols() != dim()) throw Error("point matrix has wrong number of columns");
  const auto n = static_cast<Eigen::Index>(size());
  Eigen::MatrixXd rows(points.rows(), n);
  Eigen::VectorXd z(dim());
  Eigen::VectorXd phi(n);
  for (Eigen::Index r = 0; r < points.rows(); ++r) {
    z = points.row(r).transpose();
    evaluate(std::span<const double>(z.data(), static_cast<std::size_t>(z.size())),
             std::span<double>(phi.data(), size()));
    rows.row(r) = phi.transpose();
  }
  return rows;
}

TensorBasis build_tensor_basis(const SampleSet& samples, int degree, MultiIndexSet index_set,
                               MarginalWeights weights) {
  if (index_set.dim() != samples.dim()) {
    throw Error("index set dimension " + std::to_string(index_set.dim()) + " does not match data dimension " +
                std::to_string(samples.dim()));
  }
  std::vector<RecurrenceCoefficients> per_dim;
  std::vector<double> conditions;
  per_dim.reserve(static_cast<std::size_t>(samples.dim()));
  for (Eigen::Index i = 0; i < samples.dim(); ++i) {
    const auto marginal = marginalize(samples, i, weights);
    HankelMoments h;
    try {
      per_dim.push_back(build_univariate_basis(marginal, degree, &h));
    } catch (const DeterminacyError& e) {
      throw DeterminacyError("dimension " + std::to_string(i + 1) + ": " + e.what(), e.pivot(),
                             static_cast<int>(i));
    }
    conditions.push_back(h.condition_estimate);
  }
  return TensorBasis(std::move(per_dim), std::move(index_set), std::move(conditions));
}

TensorBasis build_tensor_basis(const SampleSet& samples, int degree, MarginalWeights weights) {
  return build_tensor_basis(samples, degree, total_degree_set(static_cast<int>(samples.dim()), degree), weights);
}

}  // namespace apc
