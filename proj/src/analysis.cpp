#include "progress_decomp/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "progress_decomp/errors.hpp"
#include "progress_decomp/math_util.hpp"
#include "progress_decomp/rng.hpp"
#include "progress_decomp/scaling_model.hpp"

namespace progress {

namespace {
constexpr double kLn2 = 0.6931471805599453;
constexpr double kReferenceYear = 2012.0;
}  // namespace

DoublingTime doubling_time(const Params& p) {
  DoublingTime dt;
  dt.years = kLn2 * p.alpha_compute / p.alpha_year;
  dt.months = 12.0 * dt.years;
  dt.nonpositive_progress = !(p.alpha_year > 0.0);
  return dt;
}

ExpansionRate budget_expansion_rate(const Params& p, Branch branch) {
  ExpansionRate rate;
  rate.branch = branch;
  double numer = (branch == Branch::compute) ? p.alpha_year : p.beta_year;
  double denom = (branch == Branch::compute) ? p.alpha_compute : p.beta_data;
  if (denom == 0.0) {
    throw Error(ErrorCode::DegenerateSlope,
                branch == Branch::compute ? "alpha_compute is zero"
                                          : "beta_data is zero");
  }
  rate.ratio = numer / denom;
  rate.exp_ratio_minus_one = std::expm1(rate.ratio);
  return rate;
}

namespace {

/// Required log compute with the data branch's year term optionally frozen
/// at `freeze_year`.
double required_log_c(const Params& p, double target_p, double log_d,
                      double year, bool freeze, double freeze_year) {
  double dyear = year - kReferenceYear;
  double dyear_data = freeze ? (freeze_year - kReferenceYear) : dyear;
  double d = p.beta1 + p.beta_year * dyear_data + p.beta_data * log_d;
  double sd = sigmoid(d);
  if (!(target_p < sd)) {
    throw Error(ErrorCode::Unreachable,
                "target accuracy exceeds the data-budget ceiling");
  }
  if (p.alpha_compute == 0.0) {
    throw Error(ErrorCode::DegenerateSlope, "alpha_compute is zero");
  }
  return (logit(target_p / sd) - p.alpha1 - p.alpha_year * dyear) /
         p.alpha_compute;
}

}  // namespace

double threshold_halving_time(const Params& p, double target_p,
                              double log_d_fixed, double year_a, double year_b,
                              bool freeze_beta_year) {
  double lc_a = required_log_c(p, target_p, log_d_fixed, year_a,
                               freeze_beta_year, year_a);
  double lc_b = required_log_c(p, target_p, log_d_fixed, year_b,
                               freeze_beta_year, year_a);
  double drop = lc_a - lc_b;
  if (!(drop > 0.0)) {
    throw Error(ErrorCode::NoImprovement,
                "required compute does not decrease over the interval");
  }
  return (year_b - year_a) * 12.0 * kLn2 / drop;
}

double threshold_halving_time_instant(const Params& p, double target_p,
                                      double log_d_fixed, double year,
                                      bool freeze_beta_year) {
  double dyear = year - kReferenceYear;
  double d = p.beta1 + p.beta_year * dyear + p.beta_data * log_d_fixed;
  double sd = sigmoid(d);
  if (!(target_p < sd)) {
    throw Error(ErrorCode::Unreachable,
                "target accuracy exceeds the data-budget ceiling");
  }
  if (p.alpha_compute == 0.0) {
    throw Error(ErrorCode::DegenerateSlope, "alpha_compute is zero");
  }
  // d/dy of logit(target/sigmoid(D)): the data budget eases the required
  // effective compute as the year term grows (unless frozen).
  double u = target_p / sd;
  double du_dy = freeze_beta_year ? 0.0 : -u * (1.0 - sd) * p.beta_year;
  double dlogit_dy = du_dy / (u * (1.0 - u));
  double dlc_dy = (dlogit_dy - p.alpha_year) / p.alpha_compute;
  if (!(dlc_dy < 0.0)) {
    throw Error(ErrorCode::NoImprovement,
                "required compute is not decreasing at this year");
  }
  return 12.0 * kLn2 / (-dlc_dy);
}

ParetoFrontier pareto_frontier(const Params& p, double target_p, double year,
                               const std::vector<double>& log_d_grid) {
  ParetoFrontier frontier;
  double dyear = year - kReferenceYear;
  for (double log_d : log_d_grid) {
    try {
      double log_c = invert_for_compute(p, dyear, log_d, target_p);
      frontier.points.push_back({log_d, log_c, year, target_p});
    } catch (const Error& e) {
      if (e.code() != ErrorCode::Unreachable) throw;
      frontier.n_unreachable += 1;
    }
  }
  if (frontier.points.empty()) {
    throw Error(ErrorCode::EmptyFrontier, "no grid point can reach the target");
  }
  return frontier;
}

PredictiveSummary predictive_distribution(const BootstrapEnsemble& ens,
                                          const NormalizedRecord& r,
                                          int n_draws, std::uint64_t seed) {
  if (ens.fits.empty()) {
    throw Error(ErrorCode::EmptyEnsemble, "ensemble has no fits");
  }
  if (n_draws < 1) {
    throw Error(ErrorCode::DomainViolation, "n_draws must be >= 1");
  }
  std::vector<double> draws(static_cast<std::size_t>(n_draws));
  for (std::size_t i = 0; i < draws.size(); ++i) {
    Rng rng(derive_stream(seed, StreamDomain::Predictive, i));
    const Params& p =
        ens.fits[static_cast<std::size_t>(rng.next_below(ens.fits.size()))]
            .params;
    double mu = predicted_logit(p, r);
    double noise = std::exp(p.log_delta) * rng.next_normal();
    draws[i] = sigmoid(mu + noise);
  }
  std::sort(draws.begin(), draws.end());

  PredictiveSummary summary;
  summary.record = r;
  summary.quantile_levels = {0.025, 0.25, 0.50, 0.75, 0.975};
  for (double q : summary.quantile_levels) {
    summary.quantiles.push_back(quantile_sorted(draws, q));
  }
  summary.mean = mean(draws);
  summary.n_draws = n_draws;
  return summary;
}

BudgetGrowth effective_budget_growth(const Params& p, const Dataset& ds) {
  if (ds.records.empty()) {
    throw Error(ErrorCode::EmptyDataset, "budget growth needs records");
  }
  double c_min = std::numeric_limits<double>::infinity();
  double c_max = -c_min;
  double d_min = c_min;
  double d_max = -c_min;
  for (const auto& r : ds.records) {
    double c = effective_compute(p, r);
    double d = effective_data(p, r);
    c_min = std::min(c_min, c);
    c_max = std::max(c_max, c);
    d_min = std::min(d_min, d);
    d_max = std::max(d_max, d);
  }
  BudgetGrowth growth;
  growth.delta_compute = c_max - c_min;
  growth.delta_data = d_max - d_min;
  growth.ratio = std::exp(growth.delta_compute - growth.delta_data);
  return growth;
}

bool within_dataset_hull(const Dataset& ds, const NormalizedRecord& q,
                         double tolerance) {
  if (ds.records.empty()) return false;
  // Frank-Wolfe on min ||X w - q||^2 over the simplex. The query is inside
  // the hull iff the residual can be driven to ~0; otherwise the final
  // residual direction is a separating witness.
  struct P3 {
    double a, b, c;
  };
  std::vector<P3> x;
  x.reserve(ds.size());
  double scale = 1.0;
  for (const auto& r : ds.records) {
    x.push_back({r.dyear, r.log_c, r.log_d});
    scale = std::max({scale, std::fabs(r.dyear), std::fabs(r.log_c),
                      std::fabs(r.log_d)});
  }
  P3 target{q.dyear, q.log_c, q.log_d};
  P3 cur = x[0];
  for (int iter = 0; iter < 20000; ++iter) {
    P3 resid{cur.a - target.a, cur.b - target.b, cur.c - target.c};
    double rnorm = std::sqrt(resid.a * resid.a + resid.b * resid.b +
                             resid.c * resid.c);
    if (rnorm <= tolerance * scale) return true;
    // Vertex minimizing the linearized objective <resid, v>.
    std::size_t best = 0;
    double best_dot = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < x.size(); ++i) {
      double d = resid.a * x[i].a + resid.b * x[i].b + resid.c * x[i].c;
      if (d < best_dot) {
        best_dot = d;
        best = i;
      }
    }
    double cur_dot = resid.a * cur.a + resid.b * cur.b + resid.c * cur.c;
    double gap = cur_dot - best_dot;  // Frank-Wolfe duality gap
    if (gap <= 0.5 * tolerance * tolerance * scale * scale) {
      return false;  // residual cannot shrink further: separated
    }
    P3 dir{x[best].a - cur.a, x[best].b - cur.b, x[best].c - cur.c};
    double denom = dir.a * dir.a + dir.b * dir.b + dir.c * dir.c;
    if (denom == 0.0) return rnorm <= tolerance * scale;
    double step = std::clamp(
        -(resid.a * dir.a + resid.b * dir.b + resid.c * dir.c) / denom, 0.0,
        1.0);
    cur = {cur.a + step * dir.a, cur.b + step * dir.b, cur.c + step * dir.c};
  }
  P3 resid{cur.a - target.a, cur.b - target.b, cur.c - target.c};
  return std::sqrt(resid.a * resid.a + resid.b * resid.b +
                   resid.c * resid.c) <= tolerance * scale;
}

}  // namespace progress
