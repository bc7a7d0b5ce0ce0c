#include "apc/univariate_basis.hpp"

#include "apc/error.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace apc {

namespace {

std::string determinacy_message(int pivot) {
  return "moment matrix not positive definite (Cholesky breakdown at row " + std::to_string(pivot) +
         "): reduce K or supply >= K+1 distinct samples; largest supported degree is " + std::to_string(pivot - 1);
}

}  // namespace

RecurrenceCoefficients::RecurrenceCoefficients(std::vector<double> a, std::vector<double> b)
    : a_(std::move(a)), b_(std::move(b)) {
  if (b_.size() != a_.size() + 1) throw Error("recurrence needs K values of a and K+1 values of b");
  for (std::size_t j = 0; j < b_.size(); ++j) {
    if (!(b_[j] > 0.0) || !std::isfinite(b_[j])) {
      throw Error("recurrence coefficient b_" + std::to_string(j) + " must be positive and finite");
    }
  }
}

void RecurrenceCoefficients::evaluate(double x, int k, std::span<double> out) const {
  if (k < 0 || k > max_degree()) throw std::out_of_range("evaluation degree exceeds recurrence length");
  if (out.size() < static_cast<std::size_t>(k) + 1) throw std::out_of_range("output span too short");
  out[0] = 1.0 / std::sqrt(b_[0]);
  double prev = 0.0;
  for (int l = 0; l < k; ++l) {
    const auto ul = static_cast<std::size_t>(l);
    const double next = ((x - a_[ul]) * out[ul] - (l == 0 ? 0.0 : b_[ul] * prev)) / b_[ul + 1];
    prev = out[ul];
    out[ul + 1] = next;
  }
}

HankelMoments build_hankel(std::span<const long double> moments, int degree) {
  if (degree < 0) throw Error("degree must be non-negative");
  const auto n = static_cast<Eigen::Index>(degree) + 1;
  if (moments.size() < static_cast<std::size_t>(2 * degree + 1)) {
    throw Error("Hankel matrix of degree " + std::to_string(degree) + " needs " + std::to_string(2 * degree + 1) +
                " moments, got " + std::to_string(moments.size()));
  }

  HankelMoments h;
  h.hankel.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) h.hankel(i, j) = moments[static_cast<std::size_t>(i + j)];
  }

  // Upper Cholesky, row by row. A pivot that is not clearly above rounding
  // level relative to its diagonal entry means the moment sequence cannot
  // support a polynomial of that degree.
  constexpr long double eps = std::numeric_limits<long double>::epsilon();
  MatrixXld& r = h.cholesky;
  r = MatrixXld::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    long double pivot = h.hankel(i, i);
    for (Eigen::Index k = 0; k < i; ++k) pivot -= r(k, i) * r(k, i);
    const long double floor = 64.0L * eps * static_cast<long double>(i + 1) * std::fabs(h.hankel(i, i));
    if (!(pivot > floor) || !std::isfinite(pivot)) {
      throw DeterminacyError(determinacy_message(static_cast<int>(i)), static_cast<int>(i));
    }
    r(i, i) = std::sqrt(pivot);
    for (Eigen::Index j = i + 1; j < n; ++j) {
      long double s = h.hankel(i, j);
      for (Eigen::Index k = 0; k < i; ++k) s -= r(k, i) * r(k, j);
      r(i, j) = s / r(i, i);
    }
  }

  const auto diag = r.diagonal().cwiseAbs();
  h.condition_estimate = static_cast<double>(diag.maxCoeff() / diag.minCoeff());
  return h;
}

RecurrenceCoefficients recurrence_from_cholesky(const HankelMoments& h) {
  const MatrixXld& r = h.cholesky;
  const int k = h.degree();
  std::vector<double> a(static_cast<std::size_t>(k));
  std::vector<double> b(static_cast<std::size_t>(k) + 1);
  b[0] = static_cast<double>(h.hankel(0, 0));
  for (int j = 1; j <= k; ++j) {
    const long double lead = r(j - 1, j) / r(j - 1, j - 1);
    const long double trail = j >= 2 ? r(j - 2, j - 1) / r(j - 2, j - 2) : 0.0L;
    a[static_cast<std::size_t>(j - 1)] = static_cast<double>(lead - trail);
    b[static_cast<std::size_t>(j)] = static_cast<double>(r(j, j) / r(j - 1, j - 1));
  }
  return RecurrenceCoefficients(std::move(a), std::move(b));
}

std::vector<double> evaluate_polynomials(const RecurrenceCoefficients& rc, double x, int k) {
  std::vector<double> out(static_cast<std::size_t>(k) + 1);
  rc.evaluate(x, k, out);
  return out;
}

std::vector<long double> monomial_coefficients(std::span<const long double> moments, int degree) {
  if (degree < 0) throw Error("degree must be non-negative");
  if (moments.size() < static_cast<std::size_t>(2 * degree)) {
    throw Error("monomial system of degree " + std::to_string(degree) + " needs " + std::to_string(2 * degree) +
                " moments");
  }
  const auto n = static_cast<Eigen::Index>(degree) + 1;
  MatrixXld system = MatrixXld::Zero(n, n);
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) system(i, j) = moments[static_cast<std::size_t>(i + j)];
  }
  system(n - 1, n - 1) = 1.0L;
  Eigen::Matrix<long double, Eigen::Dynamic, 1> rhs = Eigen::Matrix<long double, Eigen::Dynamic, 1>::Zero(n);
  rhs(n - 1) = 1.0L;

  Eigen::FullPivLU<MatrixXld> lu(system);
  if (!lu.isInvertible()) {
    throw Error("monomial moment system is singular at degree " + std::to_string(degree) +
                "; use the Cholesky route");
  }
  const auto beta = lu.solve(rhs).eval();
  return std::vector<long double>(beta.data(), beta.data() + n);
}

RecurrenceCoefficients build_univariate_basis(const UnivariateMarginal& marginal, int degree,
                                              HankelMoments* diagnostics) {
  if (degree < 0) throw Error("degree must be non-negative");
  const auto distinct = count_distinct(marginal);
  if (distinct < static_cast<std::size_t>(degree) + 1) {
    const int pivot = static_cast<int>(distinct);
    throw DeterminacyError(determinacy_message(pivot) + " (data has " + std::to_string(distinct) +
                               " distinct values, degree " + std::to_string(degree) + " needs " +
                               std::to_string(degree + 1) + ")",
                           pivot);
  }
  const auto nu = raw_moments(marginal, 2 * degree);
  HankelMoments h = build_hankel(nu, degree);
  auto rc = recurrence_from_cholesky(h);
  if (diagnostics != nullptr) *diagnostics = std::move(h);
  return rc;
}

}  // namespace apc
