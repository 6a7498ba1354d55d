#pragma once

#include <functional>
#include <string>
#include <utility>

namespace fracsav {

/// Bulk free-energy density F and its derivative F'.
struct Potential {
  std::string name;
  std::function<double(double)> F;
  std::function<double(double)> Fprime;

  /// F(x) = (x^2 - 1)^2 / 4, F'(x) = x^3 - x.
  static Potential double_well() {
    return {"double_well",
            [](double x) {
              const double s = x * x - 1.0;
              return 0.25 * s * s;
            },
            [](double x) { return x * x * x - x; }};
  }
};

}  // namespace fracsav
