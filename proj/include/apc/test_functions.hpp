#pragma once

#include <span>
#include <string_view>

namespace apc {

/// Genz-style functions used in the approximation experiments.
///   f1 = exp(-sum z_i)
///   f2 = sum_{i=2}^d (1 - z_{i-1})^2 + 100 (z_i - z_{i-1}^2)^2   (generalized Rosenbrock)
///   f3 = sin(sum z_i)
///   f4 = (1 + (1/(2d)) sum c_i (1 + z_i))^(-d-1),  c_i = (1+i)/(4d), i = 1..d   (corner peak)
enum class TestFunction { f1, f2, f3, f4 };

TestFunction parse_test_function(std::string_view name);
std::string_view to_string(TestFunction f);

double evaluate(TestFunction f, std::span<const double> z);

}  // namespace apc
