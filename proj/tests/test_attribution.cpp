#include <doctest.h>

#include <cmath>
#include <vector>

#include "progress_decomp/attribution.hpp"
#include "progress_decomp/math_util.hpp"
#include "progress_decomp/rng.hpp"
#include "progress_decomp/scaling_model.hpp"
#include "test_util.hpp"

using namespace progress;

namespace {

// Test-side oracle: the direct combinatorial Shapley formula
//   phi_i = sum_S |S|! (n-|S|-1)!/n! (v(S u {i}) - v(S)),
// independent of the permutation enumeration in the library.
double factorial(unsigned n) {
  double f = 1;
  for (unsigned k = 2; k <= n; ++k) f *= k;
  return f;
}

double coalition_value_oracle(const Params& p, const Transition& t,
                              PlayerSet players, Metric metric, unsigned mask) {
  const NormalizedRecord& o = t.old_record;
  const NormalizedRecord& n = t.new_record;
  double dy_c, dy_d, lc, ld;
  if (players == PlayerSet::three) {
    dy_c = dy_d = (mask & 1u) ? n.dyear : o.dyear;
    lc = (mask & 2u) ? n.log_c : o.log_c;
    ld = (mask & 4u) ? n.log_d : o.log_d;
  } else {
    dy_c = (mask & 1u) ? n.dyear : o.dyear;
    dy_d = (mask & 2u) ? n.dyear : o.dyear;
    lc = (mask & 4u) ? n.log_c : o.log_c;
    ld = (mask & 8u) ? n.log_d : o.log_d;
  }
  double c = p.alpha1 + p.alpha_year * dy_c + p.alpha_compute * lc;
  double d = p.beta1 + p.beta_year * dy_d + p.beta_data * ld;
  double f = sigmoid(c) * sigmoid(d);
  return metric == Metric::linear ? f : logit(f);
}

std::vector<double> shapley_oracle(const Params& p, const Transition& t,
                                   PlayerSet players, Metric metric) {
  unsigned n = players == PlayerSet::three ? 3 : 4;
  std::vector<double> phi(n, 0.0);
  double n_fact = factorial(n);
  for (unsigned i = 0; i < n; ++i) {
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      if (mask & (1u << i)) continue;
      unsigned size = 0;
      for (unsigned b = 0; b < n; ++b) size += (mask >> b) & 1u;
      double weight = factorial(size) * factorial(n - size - 1) / n_fact;
      phi[i] += weight * (coalition_value_oracle(p, t, players, metric,
                                                 mask | (1u << i)) -
                          coalition_value_oracle(p, t, players, metric, mask));
    }
  }
  return phi;
}

Transition random_transition(Rng& rng) {
  auto rec = [&rng] {
    NormalizedRecord r;
    r.dyear = 12 * (rng.next_uniform() - 0.2);
    r.log_c = 16 * (rng.next_uniform() - 0.3);
    r.log_d = 10 * (rng.next_uniform() - 0.3);
    r.logit_p = 3 * (rng.next_uniform() - 0.5);
    return r;
  };
  return {rec(), rec()};
}

Params random_params(Rng& rng) {
  Params p;
  p.alpha1 = rng.next_normal();
  p.alpha_year = 0.3 * rng.next_normal();
  p.alpha_compute = 0.3 * rng.next_normal();
  p.beta1 = rng.next_normal();
  p.beta_year = 0.3 * rng.next_normal();
  p.beta_data = 0.3 * rng.next_normal();
  p.log_delta = rng.next_normal();
  return p;
}

}  // namespace

TEST_CASE("frozen three-player linear attribution") {
  Params p = testutil::reference_params();
  // endpoints: the origin and (dyear 3.33, log_c ln(3.6e18/4.7e17), log_d 0)
  Transition t{{0, 0, 0, 0.5451085740896059},
               {3.33, 2.035956429740097, 0, 1.2158856062029366}};
  AttributionResult res = shapley(p, t, PlayerSet::three, Metric::linear);
  // frozen from a 25-digit permutation-enumeration oracle
  CHECK(res.values[0] == doctest::Approx(0.08211410940305143).epsilon(1e-12));
  CHECK(res.values[1] == doctest::Approx(0.04505456323857275).epsilon(1e-12));
  CHECK(res.values[2] == 0.0);
  CHECK(res.total == doctest::Approx(0.12716867264162417).epsilon(1e-12));
  CHECK(res.no_scaling[2]);
  CHECK(!res.no_scaling[0]);
  CHECK(res.shares_defined);
  CHECK(res.shares[0] + res.shares[1] + res.shares[2] ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("frozen four-player log-odds attribution") {
  Params p = testutil::reference_params();
  Transition t{{0, 0, 0, 0.5451085740896059},
               {3.33, 2.035956429740097, 0, 1.2158856062029366}};
  AttributionResult res = shapley_four_way(p, t, Metric::log_odds);
  REQUIRE(res.values.size() == 4);
  CHECK(res.values[0] == doctest::Approx(0.3476249106041236).epsilon(1e-12));
  CHECK(res.values[1] == doctest::Approx(0.02769352814280252).epsilon(1e-12));
  CHECK(res.values[2] == doctest::Approx(0.20554208387041871).epsilon(1e-12));
  CHECK(res.values[3] == 0.0);
  CHECK(res.total == doctest::Approx(0.5808605226173448).epsilon(1e-12));
}

TEST_CASE("null transition attributes exactly zero everywhere") {
  Params p = testutil::reference_params();
  NormalizedRecord r{4.0, 3.0, 1.0, 1.0};
  Transition t{r, r};
  for (auto players : {PlayerSet::three, PlayerSet::four}) {
    for (auto metric : {Metric::linear, Metric::log_odds}) {
      AttributionResult res = shapley(p, t, players, metric);
      for (double v : res.values) CHECK(v == 0.0);
      CHECK(res.total == 0.0);
      CHECK(!res.shares_defined);
      for (bool ns : res.no_scaling) CHECK(ns);
    }
  }
}

TEST_CASE("efficiency: values sum to the total change") {
  Rng rng(2718);
  for (int trial = 0; trial < 300; ++trial) {
    Params p = random_params(rng);
    Transition t = random_transition(rng);
    for (auto players : {PlayerSet::three, PlayerSet::four}) {
      AttributionResult res = shapley(p, t, players, Metric::linear);
      double sum = 0;
      for (double v : res.values) sum += v;
      CHECK(std::fabs(sum - res.total) <= 1e-10);
    }
  }
}

TEST_CASE("symmetry: interchangeable players get equal values") {
  // With equal coefficients and equal input changes, compute and data are
  // interchangeable in every coalition.
  Params p{0.4, 0.1, 0.25, 0.4, 0.1, 0.25, -2.0};
  NormalizedRecord o{1.0, 0.7, 0.7, 0.0};
  NormalizedRecord n{1.0, 2.2, 2.2, 0.0};
  AttributionResult res = shapley(p, {o, n}, PlayerSet::three, Metric::linear);
  CHECK(std::fabs(res.values[1] - res.values[2]) <= 1e-12);
}

TEST_CASE("null player: unchanged input with zero coefficient gets zero") {
  Rng rng(31415);
  for (int trial = 0; trial < 100; ++trial) {
    Params p = random_params(rng);
    p.beta_year = 0.0;
    Transition t = random_transition(rng);
    t.new_record.log_d = t.old_record.log_d;  // no data scaling
    AttributionResult res = shapley_four_way(p, t, Metric::linear);
    CHECK(res.values[3] == 0.0);  // data player
    // the data-branch year player moves nothing when beta_year is 0
    CHECK(res.values[1] == 0.0);
  }
}

TEST_CASE("linearity: the two metrics' games add") {
  Rng rng(1618);
  for (int trial = 0; trial < 100; ++trial) {
    Params p = random_params(rng);
    Transition t = random_transition(rng);
    AttributionResult lin = shapley(p, t, PlayerSet::three, Metric::linear);
    AttributionResult lo = shapley(p, t, PlayerSet::three, Metric::log_odds);
    // Shapley value of v1+v2 equals the sum of the games' values; build the
    // summed game via the oracle.
    auto phi_lin = shapley_oracle(p, t, PlayerSet::three, Metric::linear);
    auto phi_lo = shapley_oracle(p, t, PlayerSet::three, Metric::log_odds);
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(std::fabs((lin.values[i] + lo.values[i]) -
                      (phi_lin[i] + phi_lo[i])) <= 1e-10);
    }
  }
}

TEST_CASE("permutation enumeration matches the combinatorial formula") {
  Rng rng(577);
  for (int trial = 0; trial < 300; ++trial) {
    Params p = random_params(rng);
    Transition t = random_transition(rng);
    for (auto players : {PlayerSet::three, PlayerSet::four}) {
      for (auto metric : {Metric::linear, Metric::log_odds}) {
        AttributionResult res = shapley(p, t, players, metric);
        auto oracle = shapley_oracle(p, t, players, metric);
        for (std::size_t i = 0; i < oracle.size(); ++i) {
          CHECK(std::fabs(res.values[i] - oracle[i]) <= 1e-12);
        }
      }
    }
  }
}

TEST_CASE("four-way algorithmic shares stay below the total") {
  // The two algorithmic players' combined share is less than 100% whenever
  // compute or data also scaled up.
  Params p = testutil::reference_params();
  Transition t{{0, 0, 0, 0.545}, {7.7, 9.9, 5.46, 1.95}};
  AttributionResult res = shapley_four_way(p, t, Metric::linear);
  CHECK(res.shares_defined);
  CHECK(res.shares[0] + res.shares[1] < 1.0);
  CHECK(res.shares[0] + res.shares[1] > 0.0);
}

TEST_CASE("attribution_table maps pairs and keeps order") {
  Params p = testutil::reference_params();
  std::vector<Transition> pairs = {
      {{0, 0, 0, 0.545}, {3.33, 2.036, 0, 1.216}},
      {{0, 0, 0, 0.545}, {7.7, 9.9, 5.46, 1.95}},
  };
  auto rows = attribution_table(p, pairs, PlayerSet::three, Metric::linear);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].no_scaling[2]);
  CHECK(!rows[1].no_scaling[2]);

  CHECK(attribution_table(p, {}, PlayerSet::three, Metric::linear).empty());
}

TEST_CASE("error reduction comes from the observed endpoint accuracies") {
  Params p = testutil::reference_params();
  Transition t{{0, 0, 0, logit(0.633)}, {3.33, 2.036, 0, logit(0.7715)}};
  AttributionResult res = shapley(p, t, PlayerSet::three, Metric::linear);
  CHECK(res.error_reduction == doctest::Approx(13.85).epsilon(1e-9));
}
