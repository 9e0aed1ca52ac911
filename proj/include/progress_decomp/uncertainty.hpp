#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "progress_decomp/estimation.hpp"

namespace progress {

/// Fits from resampled datasets; the basis of every confidence interval.
/// Full parameter vectors are kept so derived quantities respect the joint
/// distribution.
struct BootstrapEnsemble {
  std::vector<FitResult> fits;
  int n_requested = 0;
  int n_failed = 0;
  std::uint64_t master_seed = 0;
  std::string dataset_hash;
  PriorSpec prior;
  FitConfig config;
};

/// Scalar summary of a parameter vector (doubling time, a coefficient, ...).
using ParamFunctional = std::function<double(const Params&)>;

/// Nonparametric bootstrap: n datasets resampled with replacement (size
/// preserved), each fit independently. Replicate r's resample indices and
/// optimizer streams derive from (seed, r). Failed fits are dropped and
/// counted, not retried. Throws EmptyDataset or AllReplicatesFailed.
BootstrapEnsemble bootstrap(const Dataset& ds, const PriorSpec& spec,
                            const FitConfig& cfg, int n, std::uint64_t seed,
                            int n_threads = 0);

/// Empirical percentile interval of {g(params_r)} at the given level
/// (linear interpolation between order statistics). level in (0, 1].
std::pair<double, double> percentile_ci(const BootstrapEnsemble& ens,
                                        const ParamFunctional& g,
                                        double level);

double ensemble_mean(const BootstrapEnsemble& ens, const ParamFunctional& g);

/// Ensemble standard deviation of g (sample convention), reported alongside
/// percentile intervals for comparison.
double ensemble_std(const BootstrapEnsemble& ens, const ParamFunctional& g);

}  // namespace progress
