#include "apc/empirical_data.hpp"

#include "apc/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <string_view>

namespace apc {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool is_skippable(std::string_view line) {
  const auto t = trim(line);
  return t.empty() || t.front() == '#';
}

double parse_field(std::string_view field, std::size_t row, std::size_t column) {
  const auto t = trim(field);
  double value = 0.0;
  const char* begin = t.data();
  const char* end = t.data() + t.size();
  if (!t.empty() && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (t.empty() || ec != std::errc() || ptr != end) {
    throw LoadError("non-numeric field '" + std::string(t) + "' at row " + std::to_string(row) + ", column " +
                        std::to_string(column),
                    row, column);
  }
  if (!std::isfinite(value)) {
    throw LoadError("non-finite value at row " + std::to_string(row) + ", column " + std::to_string(column), row,
                    column);
  }
  return value;
}

// Neumaier running sum in extended precision.
struct CompensatedSum {
  long double sum = 0.0L;
  long double carry = 0.0L;

  void add(long double x) {
    const long double t = sum + x;
    if (std::fabs(sum) >= std::fabs(x)) {
      carry += (sum - t) + x;
    } else {
      carry += (x - t) + sum;
    }
    sum = t;
  }
  long double value() const { return sum + carry; }
};

}  // namespace

SampleSet::SampleSet(Eigen::MatrixXd points, Eigen::VectorXd weights)
    : points_(std::move(points)), weights_(std::move(weights)) {
  if (points_.rows() < 1 || points_.cols() < 1) throw Error("sample set must contain at least one point in d >= 1");
  if (weights_.size() != points_.rows()) {
    throw Error("sample set has " + std::to_string(points_.rows()) + " points but " +
                std::to_string(weights_.size()) + " weights");
  }
  if (!points_.allFinite()) throw Error("sample set contains non-finite coordinates");
  for (Eigen::Index j = 0; j < weights_.size(); ++j) {
    if (!(weights_[j] >= 0.0) || !std::isfinite(weights_[j])) {
      throw Error("negative or non-finite weight at row " + std::to_string(j + 1));
    }
  }
  const double total = weights_.sum();
  if (!(total > 0.0)) throw Error("sample weights sum to zero");
  weights_ /= total;
}

SampleSet SampleSet::uniform(Eigen::MatrixXd points) {
  const auto q = points.rows();
  Eigen::VectorXd w = Eigen::VectorXd::Constant(q, q > 0 ? 1.0 / static_cast<double>(q) : 0.0);
  return SampleSet(std::move(points), std::move(w));
}

SampleSet parse_sample_set(std::istream& in, LoadOptions options, const std::string& source) {
  std::vector<std::vector<double>> rows;
  std::vector<double> weights;
  std::size_t width = 0;
  std::size_t line_number = 0;
  std::string line;
  while (std::getline(in, line)) {
    ++line_number;
    if (is_skippable(line)) continue;

    std::vector<double> fields;
    std::string_view rest(line);
    std::size_t column = 0;
    while (true) {
      ++column;
      const auto comma = rest.find(',');
      fields.push_back(parse_field(rest.substr(0, comma), line_number, column));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }

    if (width == 0) {
      width = fields.size();
      if (options.weight_column && width < 2) {
        throw LoadError(source + ": weighted rows need at least one coordinate and a weight (row " +
                            std::to_string(line_number) + ")",
                        line_number);
      }
    } else if (fields.size() != width) {
      throw LoadError(source + ": ragged row " + std::to_string(line_number) + " has " +
                          std::to_string(fields.size()) + " columns, expected " + std::to_string(width),
                      line_number, fields.size());
    }

    if (options.weight_column) {
      const double w = fields.back();
      if (w < 0.0) {
        throw LoadError("negative weight at row " + std::to_string(line_number), line_number, width);
      }
      weights.push_back(w);
      fields.pop_back();
    }
    rows.push_back(std::move(fields));
  }

  if (rows.empty()) throw LoadError(source + ": no data rows", line_number);

  const auto q = static_cast<Eigen::Index>(rows.size());
  const auto d = static_cast<Eigen::Index>(rows.front().size());
  Eigen::MatrixXd points(q, d);
  for (Eigen::Index j = 0; j < q; ++j) {
    for (Eigen::Index i = 0; i < d; ++i) points(j, i) = rows[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
  }
  if (!options.weight_column) return SampleSet::uniform(std::move(points));

  Eigen::VectorXd w = Eigen::Map<Eigen::VectorXd>(weights.data(), q);
  if (!(w.sum() > 0.0)) throw LoadError(source + ": weights sum to zero", line_number);
  return SampleSet(std::move(points), std::move(w));
}

SampleSet load_sample_set(const std::filesystem::path& path, LoadOptions options) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open sample file " + path.string(), 0);
  return parse_sample_set(in, options, path.string());
}

std::vector<double> load_values(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open value file " + path.string(), 0);
  std::vector<double> values;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (is_skippable(line)) continue;
    if (line.find(',') != std::string::npos) {
      throw LoadError(path.string() + ": expected one value per row at row " + std::to_string(line_number),
                      line_number);
    }
    values.push_back(parse_field(line, line_number, 1));
  }
  if (values.empty()) throw LoadError(path.string() + ": no values", line_number);
  return values;
}

UnivariateMarginal marginalize(const SampleSet& samples, Eigen::Index dim, MarginalWeights mode) {
  if (dim < 0 || dim >= samples.dim()) {
    throw std::out_of_range("marginal dimension " + std::to_string(dim) + " out of range [0, " +
                            std::to_string(samples.dim()) + ")");
  }
  const auto q = static_cast<std::size_t>(samples.count());
  UnivariateMarginal m;
  m.values.resize(q);
  for (std::size_t j = 0; j < q; ++j) m.values[j] = samples.points()(static_cast<Eigen::Index>(j), dim);
  if (mode == MarginalWeights::uniform) {
    m.weights.assign(q, 1.0 / static_cast<double>(q));
  } else {
    m.weights.assign(samples.weights().data(), samples.weights().data() + q);
  }
  return m;
}

std::vector<long double> raw_moments(const UnivariateMarginal& marginal, int max_order) {
  if (max_order < 0) throw Error("moment order must be non-negative");
  if (marginal.values.size() != marginal.weights.size()) throw Error("marginal values and weights differ in length");
  const auto count = static_cast<std::size_t>(max_order) + 1;
  std::vector<CompensatedSum> acc(count);

  const auto& w = marginal.weights;
  const bool uniform = !w.empty() && std::all_of(w.begin(), w.end(), [&](double x) { return x == w.front(); });

  for (std::size_t j = 0; j < marginal.values.size(); ++j) {
    const long double x = marginal.values[j];
    long double p = uniform ? 1.0L : static_cast<long double>(w[j]);
    for (std::size_t k = 0; k < count; ++k) {
      acc[k].add(p);
      p *= x;
    }
  }

  std::vector<long double> nu(count);
  const long double scale = uniform ? 1.0L / static_cast<long double>(w.size()) : 1.0L;
  for (std::size_t k = 0; k < count; ++k) {
    nu[k] = acc[k].value() * scale;
    if (!std::isfinite(nu[k])) throw Error("moment of order " + std::to_string(k) + " is not finite");
  }
  if (uniform || std::fabs(nu[0] - 1.0L) <= 1e-12L) nu[0] = 1.0L;
  return nu;
}

std::size_t count_distinct(const UnivariateMarginal& marginal) {
  std::vector<double> support;
  support.reserve(marginal.values.size());
  for (std::size_t j = 0; j < marginal.values.size(); ++j) {
    if (marginal.weights[j] > 0.0) support.push_back(marginal.values[j]);
  }
  std::sort(support.begin(), support.end());
  return static_cast<std::size_t>(std::unique(support.begin(), support.end()) - support.begin());
}

std::vector<Interval> bounding_box(const SampleSet& samples) {
  std::vector<Interval> box(static_cast<std::size_t>(samples.dim()));
  for (Eigen::Index i = 0; i < samples.dim(); ++i) {
    box[static_cast<std::size_t>(i)] = {samples.points().col(i).minCoeff(), samples.points().col(i).maxCoeff()};
  }
  return box;
}

}  // namespace apc
