#include "progress_decomp/scaling_model.hpp"

#include <cmath>

#include "progress_decomp/errors.hpp"

namespace progress {

double predicted_logit(const Params& p, const NormalizedRecord& r) {
  double c = effective_compute(p, r);
  double d = effective_data(p, r);
  // log q - log(1-q) with q = sigmoid(c)*sigmoid(d); the complement is
  // assembled from sigmoid(-c), sigmoid(-d) to avoid cancellation.
  double log_q = log_sigmoid(c) + log_sigmoid(d);
  return log_q - std::log(one_minus_sigmoid_product(c, d));
}

double log_likelihood(const Params& p, const Dataset& ds) {
  if (ds.records.empty()) {
    throw Error(ErrorCode::EmptyDataset, "log_likelihood needs records");
  }
  constexpr double half_log_2pi = 0.9189385332046727;
  double inv_var = std::exp(-2.0 * p.log_delta);
  // Summed order-invariantly so results are identical under record
  // permutation (the LOO and determinism contracts rely on this).
  std::vector<double> terms;
  terms.reserve(ds.records.size());
  for (const auto& r : ds.records) {
    double resid = r.logit_p - predicted_logit(p, r);
    terms.push_back(-half_log_2pi - p.log_delta -
                    0.5 * resid * resid * inv_var);
  }
  return order_invariant_sum(terms);
}

double log_prior(const Params& p, const PriorSpec& spec) {
  spec.validate();
  constexpr double half_log_2pi = 0.9189385332046727;
  ParamArray theta = p.to_array();
  double total = 0.0;
  for (std::size_t j = 0; j < Params::count; ++j) {
    double dev = theta[j] - spec.means[j];
    total += -half_log_2pi - 0.5 * std::log(spec.variances[j]) -
             0.5 * dev * dev / spec.variances[j];
  }
  return total;
}

double neg_log_posterior(const Params& p, const Dataset& ds,
                         const PriorSpec& spec) {
  return -(log_likelihood(p, ds) + log_prior(p, spec));
}

ParamArray neg_log_posterior_grad(const Params& p, const Dataset& ds,
                                  const PriorSpec& spec) {
  if (ds.records.empty()) {
    throw Error(ErrorCode::EmptyDataset, "gradient needs records");
  }
  spec.validate();
  double inv_var = std::exp(-2.0 * p.log_delta);
  std::array<std::vector<double>, Params::count> terms;
  for (auto& t : terms) t.reserve(ds.records.size());
  for (const auto& r : ds.records) {
    double c = effective_compute(p, r);
    double d = effective_data(p, r);
    double one_minus_q = one_minus_sigmoid_product(c, d);
    double mu = log_sigmoid(c) + log_sigmoid(d) - std::log(one_minus_q);
    double resid = r.logit_p - mu;
    double w = resid * inv_var;
    // d mu / dC = sigmoid(-c) / (1-q), and likewise for D.
    double dmu_dc = sigmoid(-c) / one_minus_q;
    double dmu_dd = sigmoid(-d) / one_minus_q;
    terms[0].push_back(-w * dmu_dc);
    terms[1].push_back(-w * dmu_dc * r.dyear);
    terms[2].push_back(-w * dmu_dc * r.log_c);
    terms[3].push_back(-w * dmu_dd);
    terms[4].push_back(-w * dmu_dd * r.dyear);
    terms[5].push_back(-w * dmu_dd * r.log_d);
    terms[6].push_back(1.0 - resid * resid * inv_var);
  }
  ParamArray g{};
  ParamArray theta = p.to_array();
  for (std::size_t j = 0; j < Params::count; ++j) {
    g[j] = order_invariant_sum(terms[j]) +
           (theta[j] - spec.means[j]) / spec.variances[j];
  }
  return g;
}

double invert_for_compute(const Params& p, double dyear, double log_d,
                          double target_p) {
  double d = p.beta1 + p.beta_year * dyear + p.beta_data * log_d;
  double sd = sigmoid(d);
  if (!(target_p < sd)) {
    throw Error(ErrorCode::Unreachable,
                "no finite compute reaches the target at this data budget");
  }
  if (p.alpha_compute == 0.0) {
    throw Error(ErrorCode::DegenerateSlope, "alpha_compute is zero");
  }
  double required_c = logit(target_p / sd);
  return (required_c - p.alpha1 - p.alpha_year * dyear) / p.alpha_compute;
}

}  // namespace progress
