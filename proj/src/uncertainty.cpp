#include "progress_decomp/uncertainty.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "parallel.hpp"
#include "progress_decomp/errors.hpp"
#include "progress_decomp/math_util.hpp"
#include "progress_decomp/rng.hpp"

namespace progress {

BootstrapEnsemble bootstrap(const Dataset& ds, const PriorSpec& spec,
                            const FitConfig& cfg, int n, std::uint64_t seed,
                            int n_threads) {
  if (ds.records.empty()) {
    throw Error(ErrorCode::EmptyDataset, "bootstrap needs a non-empty dataset");
  }
  if (n < 1) {
    throw Error(ErrorCode::DomainViolation, "bootstrap needs n >= 1");
  }
  spec.validate();
  cfg.validate();

  std::size_t n_rec = ds.size();
  std::vector<std::optional<FitResult>> results(static_cast<std::size_t>(n));
  detail::parallel_for(results.size(), n_threads, [&](std::size_t r) {
    Rng resample(derive_stream(seed, StreamDomain::Bootstrap, r));
    Dataset boot;
    boot.refs = ds.refs;
    boot.source_hash = ds.source_hash;
    boot.names.reserve(n_rec);
    boot.records.reserve(n_rec);
    for (std::size_t k = 0; k < n_rec; ++k) {
      auto idx = static_cast<std::size_t>(resample.next_below(n_rec));
      boot.names.push_back(ds.names[idx]);
      boot.records.push_back(ds.records[idx]);
    }
    FitConfig fit_cfg = cfg;
    fit_cfg.master_seed = derive_stream(seed, StreamDomain::BootstrapFit, r);
    try {
      // Replicates are already parallel work items; fit sequentially inside.
      results[r] = fit_map(boot, spec, fit_cfg, 1);
    } catch (const Error&) {
      results[r] = std::nullopt;
    }
  });

  BootstrapEnsemble ens;
  ens.n_requested = n;
  ens.master_seed = seed;
  ens.dataset_hash = ds.source_hash;
  ens.prior = spec;
  ens.config = cfg;
  for (auto& r : results) {
    if (r.has_value()) {
      ens.fits.push_back(std::move(*r));
    } else {
      ens.n_failed += 1;
    }
  }
  if (ens.fits.empty()) {
    throw Error(ErrorCode::AllReplicatesFailed, "every replicate fit failed");
  }
  return ens;
}

namespace {

std::vector<double> apply(const BootstrapEnsemble& ens,
                          const ParamFunctional& g) {
  if (ens.fits.empty()) {
    throw Error(ErrorCode::EmptyEnsemble, "ensemble has no fits");
  }
  std::vector<double> values;
  values.reserve(ens.fits.size());
  for (const auto& fit : ens.fits) values.push_back(g(fit.params));
  return values;
}

}  // namespace

std::pair<double, double> percentile_ci(const BootstrapEnsemble& ens,
                                        const ParamFunctional& g,
                                        double level) {
  if (!(level > 0.0) || level > 1.0) {
    throw Error(ErrorCode::DomainViolation, "level must lie in (0, 1]");
  }
  std::vector<double> values = apply(ens, g);
  std::sort(values.begin(), values.end());
  double tail = (1.0 - level) / 2.0;
  return {quantile_sorted(values, tail), quantile_sorted(values, 1.0 - tail)};
}

double ensemble_mean(const BootstrapEnsemble& ens, const ParamFunctional& g) {
  return mean(apply(ens, g));
}

double ensemble_std(const BootstrapEnsemble& ens, const ParamFunctional& g) {
  return sample_std(apply(ens, g));
}

}  // namespace progress
