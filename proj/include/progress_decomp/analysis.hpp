#pragma once

#include <cstdint>
#include <vector>

#include "progress_decomp/types.hpp"
#include "progress_decomp/uncertainty.hpp"

namespace progress {

/// Calendar time for year-driven progress to double the effective compute
/// budget: ln(2) * alpha_compute / alpha_year. When alpha_year <= 0 the
/// signed value is reported with the flag set instead of failing.
struct DoublingTime {
  double years = 0.0;
  double months = 0.0;
  bool nonpositive_progress = false;
};

DoublingTime doubling_time(const Params& p);

enum class Branch { compute, data };

/// Annual expansion of the effective budget from the year coefficient,
/// reported both as the raw coefficient ratio (the convention used for the
/// headline percentage) and as exp(ratio) - 1.
struct ExpansionRate {
  Branch branch = Branch::compute;
  double ratio = 0.0;              // alpha_year/alpha_compute or beta analogue
  double exp_ratio_minus_one = 0.0;
};

ExpansionRate budget_expansion_rate(const Params& p, Branch branch);

/// Months for the compute required to reach `target_p` (data fixed at
/// log_d_fixed) to halve, measured between year_a and year_b. When
/// freeze_beta_year is set the data branch keeps year_a's year term at both
/// endpoints. Throws Unreachable or NoImprovement.
double threshold_halving_time(const Params& p, double target_p,
                              double log_d_fixed, double year_a, double year_b,
                              bool freeze_beta_year = false);

/// Instantaneous variant: the limit year_b -> year_a, from the analytic
/// derivative of required log compute with respect to the year.
double threshold_halving_time_instant(const Params& p, double target_p,
                                      double log_d_fixed, double year,
                                      bool freeze_beta_year = false);

/// One point of an iso-performance curve in (data, compute) space.
struct FrontierPoint {
  double log_d = 0.0;
  double log_c = 0.0;  // required compute for target at this data budget
  double year = 0.0;
  double target = 0.0;
};

struct ParetoFrontier {
  std::vector<FrontierPoint> points;  // grid order, unreachable points omitted
  std::size_t n_unreachable = 0;
};

/// Required compute across a log-data grid for a fixed target and year.
/// Throws EmptyFrontier when no grid point is reachable.
ParetoFrontier pareto_frontier(const Params& p, double target_p, double year,
                               const std::vector<double>& log_d_grid);

/// Predicted-accuracy distribution for one record under parameter
/// uncertainty (replicates drawn uniformly) plus observation noise.
struct PredictiveSummary {
  NormalizedRecord record;
  std::vector<double> quantile_levels;  // ascending, in (0,1)
  std::vector<double> quantiles;
  double mean = 0.0;
  int n_draws = 0;
};

PredictiveSummary predictive_distribution(const BootstrapEnsemble& ens,
                                          const NormalizedRecord& r,
                                          int n_draws, std::uint64_t seed);

/// Spread of the effective budgets over a dataset: max - min of C, of D, and
/// exp(dC)/exp(dD).
struct BudgetGrowth {
  double delta_compute = 0.0;
  double delta_data = 0.0;
  double ratio = 1.0;
};

BudgetGrowth effective_budget_growth(const Params& p, const Dataset& ds);

/// True when the query point lies inside the convex hull of the dataset in
/// (dyear, log_c, log_d); used to warn about extrapolation, never to refuse.
bool within_dataset_hull(const Dataset& ds, const NormalizedRecord& r,
                         double tolerance = 1e-7);

}  // namespace progress
