#pragma once

// Local minimizers for the 7-parameter objective: dense BFGS with Armijo
// backtracking, and a Nelder-Mead fallback for starts where gradient steps
// fail. Both are fully deterministic.

#include <array>
#include <cstddef>
#include <functional>

namespace progress::detail {

constexpr std::size_t kDim = 7;
using Vec = std::array<double, kDim>;

struct LocalResult {
  Vec x{};
  double f = 0.0;
  bool converged = false;
  int iterations = 0;
};

using Objective = std::function<double(const Vec&)>;
using Gradient = std::function<Vec(const Vec&)>;

LocalResult minimize_bfgs(const Objective& f, const Gradient& g, Vec x0,
                          int max_iterations, double tol_objective,
                          double tol_param);

LocalResult minimize_nelder_mead(const Objective& f, Vec x0,
                                 int max_iterations, double tol_objective,
                                 double tol_param);

}  // namespace progress::detail
