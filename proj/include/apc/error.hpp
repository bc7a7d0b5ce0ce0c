#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace apc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or unreadable sample/value files.
class LoadError : public Error {
 public:
  LoadError(const std::string& message, std::size_t row, std::optional<std::size_t> column = {})
      : Error(message), row_(row), column_(column) {}

  std::size_t row() const { return row_; }
  std::optional<std::size_t> column() const { return column_; }

 private:
  std::size_t row_;
  std::optional<std::size_t> column_;
};

/// The moment matrix is not positive definite at the requested degree.
///
/// `pivot()` is the 0-based Cholesky row that broke down; every degree below
/// it is supported by the data. `dimension()` is set when the failure
/// happened while building one factor of a tensor basis.
class DeterminacyError : public Error {
 public:
  DeterminacyError(const std::string& message, int pivot, std::optional<int> dimension = {})
      : Error(message), pivot_(pivot), dimension_(dimension) {}

  int pivot() const { return pivot_; }
  std::optional<int> dimension() const { return dimension_; }

 private:
  int pivot_;
  std::optional<int> dimension_;
};

/// The equality constraints of a basis pursuit problem have no solution.
class InfeasibleError : public Error {
 public:
  InfeasibleError(const std::string& message, double residual) : Error(message), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

}  // namespace apc
