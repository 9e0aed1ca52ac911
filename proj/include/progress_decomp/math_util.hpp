#pragma once

#include <cmath>
#include <vector>

namespace progress {

/// Standard logistic function, stable for large |x|.
inline double sigmoid(double x) {
  if (x >= 0.0) {
    return 1.0 / (1.0 + std::exp(-x));
  }
  double e = std::exp(x);
  return e / (1.0 + e);
}

/// Inverse logistic (log-odds). Requires p in (0, 1).
inline double logit(double p) { return std::log(p) - std::log1p(-p); }

/// log(sigmoid(x)) without overflow on either tail.
inline double log_sigmoid(double x) {
  if (x >= 0.0) return -std::log1p(std::exp(-x));
  return x - std::log1p(std::exp(x));
}

/// 1 - sigmoid(c)*sigmoid(d), computed from the complements so the result
/// stays accurate when both budgets are large.
inline double one_minus_sigmoid_product(double c, double d) {
  double sc = sigmoid(-c);
  double sd = sigmoid(-d);
  return sc + sd - sc * sd;
}

/// Empirical quantile with linear interpolation between order statistics
/// (the (n-1)*q convention). `sorted` must be ascending and non-empty;
/// q is clamped to [0, 1].
inline double quantile_sorted(const std::vector<double>& sorted, double q) {
  if (q <= 0.0) return sorted.front();
  if (q >= 1.0) return sorted.back();
  double h = q * static_cast<double>(sorted.size() - 1);
  auto lo = static_cast<size_t>(h);
  double frac = h - static_cast<double>(lo);
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

inline double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

/// Sum that depends only on the multiset of values, not their order: sorts,
/// then accumulates with Neumaier compensation. Non-finite inputs
/// short-circuit (sorting NaN is undefined). Consumes the buffer.
double order_invariant_sum(std::vector<double>& values);

/// Sample standard deviation (n-1 denominator); 0 for fewer than two values.
inline double sample_std(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  double m = mean(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

}  // namespace progress
