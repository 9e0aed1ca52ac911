#include "progress_decomp/math_util.hpp"

#include <algorithm>
#include <cmath>

namespace progress {

double order_invariant_sum(std::vector<double>& values) {
  for (double v : values) {
    if (!std::isfinite(v)) {
      double s = 0.0;
      for (double x : values) s += x;
      return s;
    }
  }
  std::sort(values.begin(), values.end());
  double sum = 0.0;
  double comp = 0.0;  // Neumaier correction
  for (double v : values) {
    double t = sum + v;
    if (std::fabs(sum) >= std::fabs(v)) {
      comp += (sum - t) + v;
    } else {
      comp += (v - t) + sum;
    }
    sum = t;
  }
  return sum + comp;
}

}  // namespace progress
