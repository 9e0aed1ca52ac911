#include "progress_decomp/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "optimizer.hpp"
#include "parallel.hpp"
#include "progress_decomp/errors.hpp"
#include "progress_decomp/math_util.hpp"
#include "progress_decomp/rng.hpp"
#include "progress_decomp/scaling_model.hpp"

namespace progress {
namespace {

using detail::LocalResult;
using detail::Vec;

struct StartOutcome {
  Vec x{};
  double f = std::numeric_limits<double>::infinity();
  bool converged = false;
};

Vec draw_from_prior(const PriorSpec& spec, Rng& rng) {
  Vec x{};
  for (std::size_t j = 0; j < Params::count; ++j) {
    x[j] = spec.means[j] + std::sqrt(spec.variances[j]) * rng.next_normal();
  }
  return x;
}

double param_distance(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < Params::count; ++i) {
    s += (a[i] - b[i]) * (a[i] - b[i]);
  }
  return std::sqrt(s);
}

/// One local solve: BFGS with analytic gradients, Nelder-Mead as fallback
/// when the gradient path stalls before converging.
StartOutcome run_local(const Dataset& ds, const PriorSpec& spec,
                       const FitConfig& cfg, const Vec& x0) {
  auto objective = [&](const Vec& x) {
    return neg_log_posterior(Params::from_array(x), ds, spec);
  };
  auto gradient = [&](const Vec& x) {
    return neg_log_posterior_grad(Params::from_array(x), ds, spec);
  };

  StartOutcome out;
  LocalResult r = detail::minimize_bfgs(objective, gradient, x0,
                                        cfg.max_iterations, cfg.tol_objective,
                                        cfg.tol_param);
  if (!r.converged) {
    Vec restart = std::isfinite(r.f) ? r.x : x0;
    LocalResult nm = detail::minimize_nelder_mead(
        objective, restart, cfg.max_iterations, cfg.tol_objective,
        cfg.tol_param);
    if (nm.converged || (std::isfinite(nm.f) && nm.f < r.f)) {
      // Polish the simplex result so clustered objectives agree tightly.
      LocalResult polish =
          detail::minimize_bfgs(objective, gradient, nm.x, cfg.max_iterations,
                                cfg.tol_objective, cfg.tol_param);
      r = (std::isfinite(polish.f) && polish.f <= nm.f) ? polish : nm;
      r.converged = nm.converged || polish.converged;
    }
  }
  if (!std::isfinite(r.f)) return out;
  out.x = r.x;
  out.f = r.f;
  out.converged = r.converged;
  return out;
}

std::vector<Optimum> cluster_optima(std::vector<StartOutcome> outcomes) {
  // Ascending objective; greedy assignment against cluster representatives.
  std::stable_sort(outcomes.begin(), outcomes.end(),
                   [](const StartOutcome& a, const StartOutcome& b) {
                     return a.f < b.f;
                   });
  std::vector<Optimum> clusters;
  for (const auto& o : outcomes) {
    if (!o.converged) continue;
    bool placed = false;
    for (auto& c : clusters) {
      if (std::fabs(o.f - c.objective) <= kClusterObjectiveGap &&
          param_distance(o.x, c.params.to_array()) <= kClusterParamDistance) {
        c.n_starts += 1;
        placed = true;
        break;
      }
    }
    if (!placed) {
      clusters.push_back({Params::from_array(o.x), o.f, 1});
    }
  }
  return clusters;
}

}  // namespace

void FitConfig::validate() const {
  if (n_starts < 1) {
    throw Error(ErrorCode::DomainViolation, "n_starts must be >= 1");
  }
  if (!(tol_objective > 0.0) || !(tol_param > 0.0)) {
    throw Error(ErrorCode::DomainViolation, "tolerances must be > 0");
  }
  if (max_iterations < 1) {
    throw Error(ErrorCode::DomainViolation, "max_iterations must be >= 1");
  }
}

FitResult fit_map(const Dataset& ds, const PriorSpec& spec,
                  const FitConfig& cfg, int n_threads) {
  if (ds.records.empty()) {
    throw Error(ErrorCode::EmptyDataset, "fit needs a non-empty dataset");
  }
  spec.validate();
  cfg.validate();

  std::vector<StartOutcome> outcomes(static_cast<std::size_t>(cfg.n_starts));
  detail::parallel_for(
      outcomes.size(), n_threads, [&](std::size_t s) {
        Vec x0{};
        if (s == 0) {
          for (std::size_t j = 0; j < Params::count; ++j) x0[j] = spec.means[j];
        } else {
          Rng rng(derive_stream(cfg.master_seed, StreamDomain::MultiStart, s));
          x0 = draw_from_prior(spec, rng);
        }
        outcomes[s] = run_local(ds, spec, cfg, x0);
      });

  int converged = 0;
  for (const auto& o : outcomes) converged += o.converged ? 1 : 0;
  if (converged == 0) {
    throw Error(ErrorCode::NoConvergence, "no start converged");
  }

  FitResult result;
  result.distinct_optima = cluster_optima(std::move(outcomes));
  result.params = result.distinct_optima.front().params;
  result.objective = result.distinct_optima.front().objective;
  result.log_likelihood = log_likelihood(result.params, ds);
  result.starts_requested = cfg.n_starts;
  result.starts_converged = converged;
  result.dataset_hash = ds.source_hash;
  result.prior = spec;
  result.config = cfg;
  return result;
}

namespace {

Dataset dataset_without(const Dataset& ds, std::size_t skip) {
  Dataset out;
  out.refs = ds.refs;
  out.source_hash = ds.source_hash;  // provenance of the parent dataset
  out.names.reserve(ds.size() - 1);
  out.records.reserve(ds.size() - 1);
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (i == skip) continue;
    out.names.push_back(ds.names[i]);
    out.records.push_back(ds.records[i]);
  }
  return out;
}

constexpr int kLooFreshStarts = 8;

}  // namespace

LooScore loo_log_score(const Dataset& ds, const PriorSpec& spec,
                       const FitConfig& cfg, int n_threads) {
  if (ds.records.empty()) {
    throw Error(ErrorCode::EmptyDataset, "LOO needs a non-empty dataset");
  }
  if (ds.size() < 3) {
    throw Error(ErrorCode::DomainViolation, "LOO needs at least 3 records");
  }
  spec.validate();
  cfg.validate();

  // Warm start for every fold: the full-data optimum.
  FitResult full = fit_map(ds, spec, cfg, n_threads);
  Vec warm = full.params.to_array();

  // The fresh starts are shared by all folds (derived from the master seed
  // only), so the mean score is exactly invariant to record order.
  std::vector<Vec> fold_starts;
  fold_starts.push_back(warm);
  for (int k = 1; k <= kLooFreshStarts; ++k) {
    Rng rng(derive_stream(cfg.master_seed, StreamDomain::LooFold,
                          static_cast<std::uint64_t>(k)));
    fold_starts.push_back(draw_from_prior(spec, rng));
  }

  std::size_t n = ds.size();
  std::vector<double> scores(n, std::numeric_limits<double>::quiet_NaN());
  detail::parallel_for(n, n_threads, [&](std::size_t i) {
    Dataset fold = dataset_without(ds, i);
    StartOutcome best;
    for (const Vec& x0 : fold_starts) {
      StartOutcome o = run_local(fold, spec, cfg, x0);
      if (o.converged && o.f < best.f) best = o;
    }
    if (!best.converged) return;  // fold skipped, counted below
    Params fitted = Params::from_array(best.x);
    double resid = ds.records[i].logit_p - predicted_logit(fitted, ds.records[i]);
    double inv_var = std::exp(-2.0 * fitted.log_delta);
    scores[i] = -0.9189385332046727 - fitted.log_delta -
                0.5 * resid * resid * inv_var;
  });

  LooScore out;
  std::vector<double> kept;
  kept.reserve(scores.size());
  for (double s : scores) {
    if (std::isnan(s)) {
      out.folds_failed += 1;
    } else {
      kept.push_back(s);
      out.n_folds += 1;
    }
  }
  if (out.n_folds == 0) {
    throw Error(ErrorCode::NoConvergence, "every LOO fold failed");
  }
  out.mean_log_score = order_invariant_sum(kept) / out.n_folds;
  return out;
}

VarianceSelection select_prior_variance(const Dataset& ds,
                                        const std::vector<double>& variance_grid,
                                        const FitConfig& cfg, int n_threads) {
  if (variance_grid.empty()) {
    throw Error(ErrorCode::DomainViolation, "variance grid is empty");
  }
  VarianceSelection sel;
  double best_score = -std::numeric_limits<double>::infinity();
  double best_var = 0.0;
  // Ascending scan with >= replacement implements the larger-variance
  // tie-break.
  std::vector<double> grid = variance_grid;
  std::sort(grid.begin(), grid.end());
  for (double v : grid) {
    PriorSpec spec = PriorSpec::with_variances(1.0, v);
    LooScore score = loo_log_score(ds, spec, cfg, n_threads);
    sel.grid.push_back(v);
    sel.scores.push_back(score.mean_log_score);
    if (score.mean_log_score >= best_score) {
      best_score = score.mean_log_score;
      best_var = v;
    }
  }
  sel.chosen = PriorSpec::with_variances(1.0, best_var);
  return sel;
}

}  // namespace progress
