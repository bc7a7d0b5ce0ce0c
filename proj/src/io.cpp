#include "apc/io.hpp"

#include <charconv>
#include <cmath>

namespace apc {

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, end);
}

void write_recurrence_csv(std::ostream& os, const TensorBasis& basis) {
  os << "dim,j,a,b\n";
  for (std::size_t i = 0; i < basis.per_dim().size(); ++i) {
    const auto& rc = basis.per_dim()[i];
    for (int j = 0; j <= rc.max_degree(); ++j) {
      os << i + 1 << ',' << j << ',' << (j == 0 ? std::string() : format_number(rc.a(j))) << ','
         << format_number(rc.b(j)) << '\n';
    }
  }
}

namespace {

void lambda_header(std::ostream& os, int dim) {
  for (int i = 1; i <= dim; ++i) os << ",lambda_" << i;
}

void lambda_row(std::ostream& os, const MultiIndex& lambda) {
  for (int v : lambda) os << ',' << v;
}

}  // namespace

void write_index_set_csv(std::ostream& os, const MultiIndexSet& set) {
  os << "index";
  lambda_header(os, set.dim());
  os << '\n';
  for (std::size_t j = 0; j < set.size(); ++j) {
    os << j;
    lambda_row(os, set[j]);
    os << '\n';
  }
}

void write_plan_csv(std::ostream& os, const SubsamplePlan& plan) {
  os << "row";
  for (int i = 1; i <= plan.dim(); ++i) os << ",z_" << i;
  os << ",W,source_row\n";
  for (Eigen::Index r = 0; r < plan.size(); ++r) {
    os << r;
    for (Eigen::Index i = 0; i < plan.points.cols(); ++i) os << ',' << format_number(plan.points(r, i));
    os << ',' << format_number(plan.weights[r]) << ',' << plan.source_rows[static_cast<std::size_t>(r)] << '\n';
  }
}

void write_coefficients_csv(std::ostream& os, const MultiIndexSet& set, const Eigen::VectorXd& coefficients) {
  os << "index,coefficient";
  lambda_header(os, set.dim());
  os << '\n';
  for (std::size_t j = 0; j < set.size(); ++j) {
    os << j << ',' << format_number(coefficients[static_cast<Eigen::Index>(j)]);
    lambda_row(os, set[j]);
    os << '\n';
  }
}

void write_results_csv(std::ostream& os, const ResultTable& table) {
  os << "sampler,M,metric,stderr,trials\n";
  for (const auto& row : table.rows) {
    os << to_string(row.sampler) << ',' << row.sample_count << ',' << format_number(row.metric) << ','
       << format_number(row.std_error) << ',' << row.trials << '\n';
  }
}

}  // namespace apc
