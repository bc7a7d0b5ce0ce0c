#pragma once

#include "apc/empirical_data.hpp"

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace apc {

using MatrixXld = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;

/// Three-term recurrence for an orthonormal family phi_0..phi_K:
///
///   x phi_l(x) = b_{l+1} phi_{l+1}(x) + a_{l+1} phi_l(x) + b_l phi_{l-1}(x),
///   phi_{-1} = 0, phi_0 = 1 / sqrt(b_0).
///
/// a_j is defined for 1 <= j <= K, b_j for 0 <= j <= K; every b_j is strictly
/// positive.
class RecurrenceCoefficients {
 public:
  /// `a` holds a_1..a_K and `b` holds b_0..b_K.
  RecurrenceCoefficients(std::vector<double> a, std::vector<double> b);

  int max_degree() const { return static_cast<int>(a_.size()); }

  double a(int j) const { return a_.at(static_cast<std::size_t>(j - 1)); }
  double b(int j) const { return b_.at(static_cast<std::size_t>(j)); }

  /// phi_0(x)..phi_k(x) written into out[0..k]; requires k <= max_degree().
  void evaluate(double x, int k, std::span<double> out) const;

 private:
  std::vector<double> a_;
  std::vector<double> b_;
};

/// Hankel matrix of moments H[i][j] = nu_{i+j} and its upper Cholesky factor
/// (H = R^T R). Kept in extended precision: the factor is what the recurrence
/// coefficients are read from, and H becomes badly conditioned quickly.
struct HankelMoments {
  MatrixXld hankel;
  MatrixXld cholesky;

  /// max r_ii / min r_ii, a cheap lower bound on cond(R).
  double condition_estimate = 1.0;

  int degree() const { return static_cast<int>(hankel.rows()) - 1; }
  bool ill_conditioned() const { return condition_estimate > 1e12; }
};

/// Assemble the (K+1)x(K+1) Hankel matrix from nu_0..nu_2K and factor it.
/// Throws DeterminacyError naming the failing pivot when H is not positive
/// definite.
HankelMoments build_hankel(std::span<const long double> moments, int degree);

/// Read a_j, b_j off the Cholesky factor:
///   a_j = r_{j,j+1}/r_{j,j} - r_{j-1,j}/r_{j-1,j-1},  b_j = r_{j+1,j+1}/r_{j,j}
/// (1-based r, with r_{0,0} = 1 and r_{0,1} = 0) and b_0 = nu_0.
RecurrenceCoefficients recurrence_from_cholesky(const HankelMoments& h);

/// (phi_0(x), ..., phi_k(x)) by forward recurrence.
std::vector<double> evaluate_polynomials(const RecurrenceCoefficients& rc, double x, int k);

/// Monomial coefficients beta_0..beta_K of the monic degree-K orthogonal
/// polynomial, from the moment linear system. Diagnostic cross-check only: the
/// system is far worse conditioned than the Cholesky route.
std::vector<long double> monomial_coefficients(std::span<const long double> moments, int degree);

/// Full univariate construction from samples: moments, Hankel factorization and
/// recurrence. Fails with DeterminacyError when the marginal has fewer than
/// degree + 1 distinct support points.
RecurrenceCoefficients build_univariate_basis(const UnivariateMarginal& marginal, int degree,
                                              HankelMoments* diagnostics = nullptr);

}  // namespace apc
