#pragma once

#include <vector>

namespace decosim {

// Monotone (Fritsch-Carlson) cubic Hermite interpolant. Shape preserving:
// never overshoots the local data range, so nonnegative data stays
// nonnegative. Evaluation outside [x.front(), x.back()] throws — tabulated
// weights forbid extrapolation.
class MonotoneCubic {
 public:
  MonotoneCubic(std::vector<double> x, std::vector<double> y);

  double operator()(double x) const;

  const std::vector<double>& knots() const { return x_; }
  const std::vector<double>& values() const { return y_; }

 private:
  std::vector<double> x_, y_, d_;
};

}  // namespace decosim
