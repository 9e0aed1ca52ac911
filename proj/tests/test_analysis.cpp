#include <doctest.h>

#include <cmath>

#include "progress_decomp/analysis.hpp"
#include "progress_decomp/data_ingest.hpp"
#include "progress_decomp/errors.hpp"
#include "progress_decomp/scaling_model.hpp"
#include "test_util.hpp"

using namespace progress;

TEST_CASE("doubling time: frozen value and scaling identities") {
  Params p = testutil::reference_params();
  DoublingTime dt = doubling_time(p);
  // frozen from a 25-digit evaluation of 12*ln(2)*0.154/0.159
  CHECK(dt.months == doctest::Approx(8.056201192923138).epsilon(1e-13));
  CHECK(dt.months == 12.0 * dt.years);
  CHECK(!dt.nonpositive_progress);

  Params equal = p;
  equal.alpha_year = equal.alpha_compute;
  CHECK(doubling_time(equal).years ==
        doctest::Approx(0.6931471805599453).epsilon(1e-15));

  Params faster = p;
  faster.alpha_year *= 2.0;
  CHECK(doubling_time(faster).years ==
        doctest::Approx(dt.years / 2.0).epsilon(1e-12));

  Params stalled = p;
  stalled.alpha_year = -0.05;
  DoublingTime flagged = doubling_time(stalled);
  CHECK(flagged.nonpositive_progress);
  CHECK(flagged.years < 0.0);  // signed value is reported, not hidden
}

TEST_CASE("budget expansion rates") {
  Params p = testutil::reference_params();
  ExpansionRate c = budget_expansion_rate(p, Branch::compute);
  ExpansionRate d = budget_expansion_rate(p, Branch::data);
  // frozen ratios 0.159/0.154 and 0.019/0.063
  CHECK(c.ratio == doctest::Approx(1.0324675324675325).epsilon(1e-14));
  CHECK(d.ratio == doctest::Approx(0.30158730158730157).epsilon(1e-14));
  CHECK(c.exp_ratio_minus_one ==
        doctest::Approx(std::expm1(c.ratio)).epsilon(1e-14));

  Params zero_year = p;
  zero_year.beta_year = 0.0;
  CHECK(budget_expansion_rate(zero_year, Branch::data).ratio == 0.0);

  Params degenerate = p;
  degenerate.beta_data = 0.0;
  CHECK_THROWS_AS(budget_expansion_rate(degenerate, Branch::data), Error);
}

TEST_CASE("threshold halving time: frozen value and error paths") {
  Params p = testutil::reference_params();
  // frozen closed-form evaluation at threshold 0.70, log_d 0, 2012 -> 2022
  CHECK(threshold_halving_time(p, 0.70, 0.0, 2012, 2022) ==
        doctest::Approx(7.4424468258882195).epsilon(1e-10));

  // the data ceiling at log_d 0 is sigmoid(1.783) ~ 0.8561: 0.88 unreachable
  try {
    threshold_halving_time(p, 0.88, 0.0, 2012, 2022);
    FAIL("expected Unreachable");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Unreachable);
  }

  // negative year progress makes required compute grow
  Params regress = p;
  regress.alpha_year = -0.1;
  regress.beta_year = 0.0;
  try {
    threshold_halving_time(regress, 0.6, 0.0, 2012, 2022);
    FAIL("expected NoImprovement");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoImprovement);
  }
}

TEST_CASE("halving times fall as thresholds rise (reachable regime)") {
  Params p = testutil::reference_params();
  double last = 1e30;
  for (double threshold : {0.60, 0.70, 0.80, 0.84}) {
    double months = threshold_halving_time(p, threshold, 0.0, 2012, 2022);
    CHECK(months < last);
    last = months;
  }
}

TEST_CASE("halving time approaches doubling time as the data ceiling lifts") {
  Params p = testutil::reference_params();
  double months = threshold_halving_time(p, 0.9, 50.0, 2012, 2022);
  CHECK(months ==
        doctest::Approx(doubling_time(p).months).epsilon(1e-6));
  double instant = threshold_halving_time_instant(p, 0.9, 50.0, 2017);
  CHECK(instant ==
        doctest::Approx(doubling_time(p).months).epsilon(1e-6));
}

TEST_CASE("instantaneous halving time is the small-interval limit") {
  Params p = testutil::reference_params();
  double instant = threshold_halving_time_instant(p, 0.7, 1.5, 2016);
  double tiny = threshold_halving_time(p, 0.7, 1.5, 2016, 2016 + 1e-6);
  CHECK(instant == doctest::Approx(tiny).epsilon(1e-5));

  // freezing the data branch's year term removes its easing effect
  double frozen = threshold_halving_time_instant(p, 0.7, 1.5, 2016, true);
  CHECK(frozen > instant);
}

TEST_CASE("pareto frontier: monotone, exact, and shifting with the year") {
  Params p = testutil::reference_params();
  std::vector<double> grid;
  for (int i = 0; i <= 40; ++i) grid.push_back(0.2 * i);

  ParetoFrontier f2018 = pareto_frontier(p, 0.8, 2018, grid);
  REQUIRE(!f2018.points.empty());
  double last_c = 1e300;
  for (const auto& pt : f2018.points) {
    CHECK(pt.log_c <= last_c);  // more data never needs more compute
    last_c = pt.log_c;
    NormalizedRecord r{pt.year - 2012.0, pt.log_c, pt.log_d, 0};
    CHECK(predict_accuracy(p, r) == doctest::Approx(0.8).epsilon(1e-9));
  }

  ParetoFrontier f2022 = pareto_frontier(p, 0.8, 2022, grid);
  // later frontier needs less compute at every shared data budget
  std::size_t shared = std::min(f2018.points.size(), f2022.points.size());
  for (std::size_t i = 0; i < shared; ++i) {
    std::size_t i18 = f2018.points.size() - 1 - i;
    std::size_t i22 = f2022.points.size() - 1 - i;
    CHECK(f2018.points[i18].log_d == f2022.points[i22].log_d);
    CHECK(f2022.points[i22].log_c < f2018.points[i18].log_c);
  }

  // asymptote: with unlimited data the requirement tends to a closed form
  ParetoFrontier far = pareto_frontier(p, 0.8, 2018, {1e5});
  double expected =
      (logit(0.8) - p.alpha1 - p.alpha_year * 6.0) / p.alpha_compute;
  CHECK(far.points.front().log_c == doctest::Approx(expected).epsilon(1e-6));

  // unreachable grid points are omitted and counted
  ParetoFrontier partial = pareto_frontier(p, 0.87, 2012, grid);
  CHECK(partial.n_unreachable > 0);
  CHECK(partial.points.size() + partial.n_unreachable == grid.size());

  CHECK_THROWS_AS(pareto_frontier(p, 0.999, 2012, {0.0, 1.0}), Error);
}

TEST_CASE("predictive distribution: degenerate and noisy ensembles") {
  Params p = testutil::reference_params();
  Dataset ds = testutil::synthetic_dataset(p, 10, 3);
  FitResult fake;
  fake.params = p;
  fake.params.log_delta = -30.0;  // effectively noiseless
  BootstrapEnsemble ens;
  ens.fits = {fake};
  ens.n_requested = 1;

  NormalizedRecord r{5, 4, 1, 0};
  PredictiveSummary s = predictive_distribution(ens, r, 2000, 7);
  double point = predict_accuracy(p, r);
  for (double q : s.quantiles) {
    CHECK(q == doctest::Approx(point).epsilon(1e-9));
  }
  for (std::size_t i = 1; i < s.quantiles.size(); ++i) {
    CHECK(s.quantiles[i] >= s.quantiles[i - 1]);
  }

  // inflating delta widens the interval
  BootstrapEnsemble noisy = ens;
  noisy.fits[0].params.log_delta = -1.0;
  PredictiveSummary sn = predictive_distribution(noisy, r, 2000, 7);
  CHECK(sn.quantiles.back() - sn.quantiles.front() >
        s.quantiles.back() - s.quantiles.front());

  // determinism in the seed
  PredictiveSummary s2 = predictive_distribution(ens, r, 2000, 7);
  CHECK(s.quantiles == s2.quantiles);
  CHECK(s.mean == s2.mean);

  CHECK_THROWS_AS(predictive_distribution(BootstrapEnsemble{}, r, 10, 1),
                  Error);
  CHECK_THROWS_AS(predictive_distribution(ens, r, 0, 1), Error);
}

TEST_CASE("effective budget growth") {
  Params p = testutil::reference_params();
  NormConstants refs;
  std::vector<ModelRecord> records;
  records.push_back(denormalize({0, 0, 0, 0.5451085740896059}, refs, "a"));
  records.push_back(denormalize({3, 1.2, 0.4, 1.1}, refs, "b"));
  Dataset ds = build_dataset(records);
  BudgetGrowth g = effective_budget_growth(p, ds);
  // frozen: dC = 0.159*3 + 0.154*1.2, dD = 0.019*3 + 0.063*0.4
  CHECK(g.delta_compute == doctest::Approx(0.6618).epsilon(1e-12));
  CHECK(g.delta_data == doctest::Approx(0.0822).epsilon(1e-12));
  CHECK(g.ratio == doctest::Approx(1.7853241582417986).epsilon(1e-12));

  Dataset single = build_dataset({records[0]});
  BudgetGrowth g1 = effective_budget_growth(p, single);
  CHECK(g1.delta_compute == 0.0);
  CHECK(g1.delta_data == 0.0);
  CHECK(g1.ratio == 1.0);

  Params flat{0.3, 0, 0, 0.7, 0, 0, -2};
  BudgetGrowth gf = effective_budget_growth(flat, ds);
  CHECK(gf.delta_compute == 0.0);
  CHECK(gf.delta_data == 0.0);
  CHECK(gf.ratio == 1.0);

  CHECK_THROWS_AS(effective_budget_growth(p, Dataset{}), Error);
}

TEST_CASE("convex hull membership in covariate space") {
  Params p = testutil::reference_params();
  Dataset ds = testutil::synthetic_dataset(p, 40, 55);

  // every dataset point is in its own hull
  for (const auto& r : ds.records) {
    CHECK(within_dataset_hull(ds, r));
  }
  // the centroid is inside
  NormalizedRecord centroid{0, 0, 0, 0};
  for (const auto& r : ds.records) {
    centroid.dyear += r.dyear / ds.size();
    centroid.log_c += r.log_c / ds.size();
    centroid.log_d += r.log_d / ds.size();
  }
  CHECK(within_dataset_hull(ds, centroid));

  // a far-away point is outside
  NormalizedRecord far{100, 100, 100, 0};
  CHECK(!within_dataset_hull(ds, far));
  NormalizedRecord early{-5, -40, 0, 0};
  CHECK(!within_dataset_hull(ds, early));
}
