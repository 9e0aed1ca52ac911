#pragma once

#include <cstdint>
#include <vector>

#include "progress_decomp/prior.hpp"
#include "progress_decomp/types.hpp"

namespace progress {

struct FitConfig {
  int n_starts = 64;
  int max_iterations = 2000;
  double tol_objective = 1e-10;
  double tol_param = 1e-8;
  std::uint64_t master_seed = 0;

  void validate() const;
};

/// One local optimum cluster. Two optima belong to the same cluster when
/// their parameter distance is <= 1e-3 and their objective gap is <= 1e-6.
struct Optimum {
  Params params;
  double objective = 0.0;
  int n_starts = 0;  // starts that landed here
};

struct FitResult {
  Params params;              // best optimum found
  double objective = 0.0;     // neg log posterior at the optimum
  double log_likelihood = 0.0;
  int starts_requested = 0;
  int starts_converged = 0;
  std::vector<Optimum> distinct_optima;  // ascending objective
  std::string dataset_hash;
  PriorSpec prior;   // echo of the inputs, for serialization
  FitConfig config;
};

constexpr double kClusterParamDistance = 1e-3;
constexpr double kClusterObjectiveGap = 1e-6;

/// MAP fit by multi-start local minimization. Start 0 is the prior mean; the
/// rest are prior draws derived from (master_seed, start index), so the
/// result is identical under any thread count. Throws EmptyDataset or
/// NoConvergence.
FitResult fit_map(const Dataset& ds, const PriorSpec& spec,
                  const FitConfig& cfg, int n_threads = 0);

struct LooScore {
  double mean_log_score = 0.0;  // mean held-out log predictive density
  int n_folds = 0;
  int folds_failed = 0;
};

/// Leave-one-out log score: each fold refits without record i (warm start at
/// the full-data optimum plus 8 fresh prior draws) and scores record i's
/// residual. Failed folds are skipped and counted. Needs >= 3 records.
LooScore loo_log_score(const Dataset& ds, const PriorSpec& spec,
                       const FitConfig& cfg, int n_threads = 0);

struct VarianceSelection {
  PriorSpec chosen;
  std::vector<double> grid;
  std::vector<double> scores;  // mean LOO log score per grid value
};

/// Picks the slope variance from `variance_grid` maximizing the LOO score;
/// ties break toward the larger variance.
VarianceSelection select_prior_variance(const Dataset& ds,
                                        const std::vector<double>& variance_grid,
                                        const FitConfig& cfg,
                                        int n_threads = 0);

}  // namespace progress
