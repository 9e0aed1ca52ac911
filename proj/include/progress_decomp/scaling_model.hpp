#pragma once

#include "progress_decomp/math_util.hpp"
#include "progress_decomp/prior.hpp"
#include "progress_decomp/types.hpp"

namespace progress {

/// Effective compute budget C (log scale): the compute branch's intercept
/// plus per-year drift plus the log-compute term.
inline double effective_compute(const Params& p, const NormalizedRecord& r) {
  return p.alpha1 + p.alpha_year * r.dyear + p.alpha_compute * r.log_c;
}

/// Effective data budget D (log scale), the data-branch analogue.
inline double effective_data(const Params& p, const NormalizedRecord& r) {
  return p.beta1 + p.beta_year * r.dyear + p.beta_data * r.log_d;
}

/// Noiseless predicted top-1 accuracy: sigmoid(C) * sigmoid(D).
inline double predict_accuracy(const Params& p, const NormalizedRecord& r) {
  return sigmoid(effective_compute(p, r)) * sigmoid(effective_data(p, r));
}

/// logit(sigmoid(C) * sigmoid(D)), stable when both budgets are large.
double predicted_logit(const Params& p, const NormalizedRecord& r);

/// Sum over records of the Gaussian log-density of the logit residual,
/// with noise scale exp(log_delta). Throws EmptyDataset.
double log_likelihood(const Params& p, const Dataset& ds);

/// Sum of independent Gaussian log-densities of the parameters under `spec`.
double log_prior(const Params& p, const PriorSpec& spec);

/// -(log_likelihood + log_prior): the objective minimized by fitting.
double neg_log_posterior(const Params& p, const Dataset& ds,
                         const PriorSpec& spec);

/// Analytic gradient of neg_log_posterior in Params::to_array order.
ParamArray neg_log_posterior_grad(const Params& p, const Dataset& ds,
                                  const PriorSpec& spec);

/// Log compute required to hit `target_p` exactly at the given year offset
/// and data budget. Throws Unreachable when target_p >= sigmoid(D) and
/// DegenerateSlope when alpha_compute is 0.
double invert_for_compute(const Params& p, double dyear, double log_d,
                          double target_p);

/// Large-budget approximation 1 - exp(-C) - exp(-D) of predict_accuracy.
inline double chinchilla_approx(const Params& p, const NormalizedRecord& r) {
  return 1.0 - std::exp(-effective_compute(p, r)) -
         std::exp(-effective_data(p, r));
}

}  // namespace progress
