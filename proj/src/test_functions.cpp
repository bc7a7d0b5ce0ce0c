#include "apc/test_functions.hpp"

#include "apc/error.hpp"

#include <cmath>
#include <string>

namespace apc {

TestFunction parse_test_function(std::string_view name) {
  if (name == "f1") return TestFunction::f1;
  if (name == "f2") return TestFunction::f2;
  if (name == "f3") return TestFunction::f3;
  if (name == "f4") return TestFunction::f4;
  throw Error("unknown test function '" + std::string(name) + "' (expected f1..f4)");
}

std::string_view to_string(TestFunction f) {
  switch (f) {
    case TestFunction::f1:
      return "f1";
    case TestFunction::f2:
      return "f2";
    case TestFunction::f3:
      return "f3";
    case TestFunction::f4:
      return "f4";
  }
  return "?";
}

double evaluate(TestFunction f, std::span<const double> z) {
  const auto d = z.size();
  double sum = 0.0;
  switch (f) {
    case TestFunction::f1:
      for (double v : z) sum += v;
      return std::exp(-sum);
    case TestFunction::f2:
      for (std::size_t i = 1; i < d; ++i) {
        const double lag = z[i - 1];
        sum += (1.0 - lag) * (1.0 - lag) + 100.0 * (z[i] - lag * lag) * (z[i] - lag * lag);
      }
      return sum;
    case TestFunction::f3:
      for (double v : z) sum += v;
      return std::sin(sum);
    case TestFunction::f4: {
      const double dd = static_cast<double>(d);
      for (std::size_t i = 0; i < d; ++i) {
        const double c = (2.0 + static_cast<double>(i)) / (4.0 * dd);
        sum += c * (1.0 + z[i]);
      }
      return std::pow(1.0 + sum / (2.0 * dd), -dd - 1.0);
    }
  }
  return 0.0;
}

}  // namespace apc
