#pragma once

#include <array>

#include "progress_decomp/errors.hpp"
#include "progress_decomp/types.hpp"

namespace progress {

/// Independent Gaussian prior, one component per parameter. Defaults:
/// variance 1 for the intercepts and the noise scale, 0.09 for the four
/// slope coefficients.
struct PriorSpec {
  ParamArray means = {0, 0, 0, 0, 0, 0, 0};
  ParamArray variances = {1.0, 0.09, 0.09, 1.0, 0.09, 0.09, 1.0};

  /// Indices of alpha_year, alpha_compute, beta_year, beta_data.
  static constexpr std::array<std::size_t, 4> slope_indices = {1, 2, 4, 5};

  static PriorSpec with_variances(double intercept_var, double slope_var) {
    PriorSpec spec;
    spec.variances = {intercept_var, slope_var, slope_var, intercept_var,
                      slope_var,     slope_var, intercept_var};
    return spec;
  }

  double slope_variance() const { return variances[slope_indices[0]]; }

  void validate() const {
    for (double v : variances) {
      if (!(v > 0.0)) {
        throw Error(ErrorCode::DomainViolation, "prior variances must be > 0");
      }
    }
  }
};

}  // namespace progress
