#include <doctest.h>

#include <cmath>

#include "progress_decomp/data_ingest.hpp"
#include "progress_decomp/errors.hpp"
#include "progress_decomp/rng.hpp"
#include "progress_decomp/scaling_model.hpp"
#include "test_util.hpp"

using namespace progress;

namespace {

Dataset two_record_dataset() {
  // Covariates chosen by hand; accuracies are sigmoid of the frozen logits.
  std::vector<ModelRecord> records;
  NormConstants refs;
  records.push_back(denormalize({0.0, 0.0, 0.0, 0.5451085740896059}, refs, "a"));
  records.push_back(denormalize({3.0, 1.2, 0.4, 1.1}, refs, "b"));
  return build_dataset(records);
}

}  // namespace

TEST_CASE("effective budgets at the reference point") {
  Params p = testutil::reference_params();
  NormalizedRecord origin{0, 0, 0, 0};
  CHECK(effective_compute(p, origin) == 0.889);
  CHECK(effective_data(p, origin) == 1.783);

  NormalizedRecord decade{10, 0, 0, 0};
  CHECK(effective_compute(p, decade) == doctest::Approx(2.479).epsilon(1e-12));

  // frozen from a 25-digit evaluation of 1.783 + 0.063*ln(10)
  NormalizedRecord tenfold_data{0, 0, 2.302585092994046, 0};
  CHECK(effective_data(p, tenfold_data) ==
        doctest::Approx(1.9280628608586249).epsilon(1e-13));

  Params no_year = p;
  no_year.alpha_year = 0.0;
  CHECK(effective_compute(no_year, decade) ==
        effective_compute(no_year, origin));
}

TEST_CASE("predict_accuracy is the product of two sigmoids") {
  Params p = testutil::reference_params();
  // frozen from a 25-digit evaluation of sigmoid(0.889)*sigmoid(1.783)
  CHECK(predict_accuracy(p, {0, 0, 0, 0}) ==
        doctest::Approx(0.6066807204893194).epsilon(1e-14));

  // saturation: both budgets huge
  CHECK(predict_accuracy(p, {0, 1000, 1000, 0}) == doctest::Approx(1.0));

  // symmetry: C == D implies sigmoid(C)^2
  Params q{0.5, 0.0, 1.0, 0.5, 0.0, 1.0, -2.0};
  NormalizedRecord r{0, 1.3, 1.3, 0};
  double s = sigmoid(0.5 + 1.3);
  CHECK(predict_accuracy(q, r) == doctest::Approx(s * s).epsilon(1e-14));
}

TEST_CASE("predicted_logit is stable for extreme budgets") {
  Params p{10.0, 0.0, 3.0, 12.0, 0.0, 3.0, -2.0};
  NormalizedRecord r{0, 200, 200, 0};
  double mu = predicted_logit(p, r);
  CHECK(std::isfinite(mu));
  CHECK(mu > 100.0);  // q is 1 - ~e^-610; the naive formula overflows to inf
}

TEST_CASE("predict_accuracy is strictly increasing in each budget input") {
  Rng rng(11);
  Params p = testutil::reference_params();
  for (int i = 0; i < 200; ++i) {
    NormalizedRecord r;
    r.dyear = 20 * (rng.next_uniform() - 0.5);
    r.log_c = 30 * (rng.next_uniform() - 0.5);
    r.log_d = 30 * (rng.next_uniform() - 0.5);
    NormalizedRecord more_c = r;
    more_c.log_c += 0.5;
    NormalizedRecord more_d = r;
    more_d.log_d += 0.5;
    CHECK(predict_accuracy(p, more_c) > predict_accuracy(p, r));
    CHECK(predict_accuracy(p, more_d) > predict_accuracy(p, r));
  }
}

TEST_CASE("log_likelihood matches the frozen two-record value") {
  Params p = testutil::reference_params();
  Dataset ds = two_record_dataset();
  // frozen from a 25-digit evaluation of the two Gaussian log densities
  CHECK(log_likelihood(p, ds) ==
        doctest::Approx(0.7514025800967753).epsilon(1e-10));
}

TEST_CASE("log_likelihood of zero residuals at delta 1") {
  Params p = testutil::reference_params();
  p.log_delta = 0.0;
  NormConstants refs;
  std::vector<ModelRecord> records;
  for (int i = 0; i < 4; ++i) {
    NormalizedRecord r{0.5 * i, 0.8 * i, 0.3 * i, 0.0};
    r.logit_p = predicted_logit(p, r);
    records.push_back(denormalize(r, refs, "r" + std::to_string(i)));
  }
  Dataset ds = build_dataset(records);
  // per-record contribution is exactly -0.5*ln(2*pi)
  CHECK(log_likelihood(p, ds) ==
        doctest::Approx(-4 * 0.9189385332046727).epsilon(1e-9));
}

TEST_CASE("log_likelihood falls linearly in log delta once noise dominates") {
  Params p = testutil::reference_params();
  Dataset ds = two_record_dataset();
  Params a = p;
  a.log_delta = 8.0;
  Params b = p;
  b.log_delta = 9.0;
  double drop = log_likelihood(a, ds) - log_likelihood(b, ds);
  CHECK(drop == doctest::Approx(static_cast<double>(ds.size())).epsilon(1e-6));
}

TEST_CASE("log_likelihood decomposes over dataset partitions") {
  Params p = testutil::reference_params();
  Dataset ds = testutil::synthetic_dataset(p, 40, 5);
  Dataset head;
  Dataset tail;
  head.refs = tail.refs = ds.refs;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    auto& part = (i < 17) ? head : tail;
    part.names.push_back(ds.names[i]);
    part.records.push_back(ds.records[i]);
  }
  CHECK(log_likelihood(p, ds) ==
        doctest::Approx(log_likelihood(p, head) + log_likelihood(p, tail))
            .epsilon(1e-12));
  CHECK_THROWS_AS(log_likelihood(p, Dataset{}), Error);
}

TEST_CASE("log_prior: frozen values and monotonicity") {
  PriorSpec spec;
  Params zero{};
  // frozen: 3 components with variance 1, 4 with variance 0.09, all at mean
  double at_mode = log_prior(zero, spec);
  CHECK(at_mode == doctest::Approx(-1.6166785151289652).epsilon(1e-13));

  // a slope at 0.3 under variance 0.09 contributes its quadratic penalty
  // (the full frozen component density is -0.2149657288787367)
  Params slope{};
  slope.alpha_compute = 0.3;
  CHECK(log_prior(slope, spec) - at_mode ==
        doctest::Approx(-0.5).epsilon(1e-12));

  // doubling a variance raises the density of far-from-zero values
  PriorSpec wide = PriorSpec::with_variances(1.0, 0.18);
  Params far{};
  far.beta_data = 1.0;
  CHECK(log_prior(far, wide) > log_prior(far, spec));
}

TEST_CASE("neg_log_posterior agrees with an independent oracle") {
  Params p = testutil::reference_params();
  PriorSpec spec;
  Dataset ds = testutil::synthetic_dataset(p, 60, 17);
  double mine = neg_log_posterior(p, ds, spec);
  double oracle = testutil::neg_log_posterior_oracle(p, ds, spec);
  CHECK(mine == doctest::Approx(oracle).epsilon(1e-9));
  CHECK(std::fabs(mine - oracle) < 0.5);  // the coarse dual-route bound

  // shrinking delta below the residual scale blows up the objective
  Params tight = p;
  tight.log_delta = -9.0;
  CHECK(neg_log_posterior(tight, ds, spec) > mine);
}

TEST_CASE("analytic gradient matches central finite differences") {
  Params truth = testutil::reference_params();
  PriorSpec spec;
  Dataset ds = testutil::synthetic_dataset(truth, 30, 23);
  Rng rng(101);
  for (int trial = 0; trial < 100; ++trial) {
    ParamArray x{};
    for (std::size_t j = 0; j < Params::count; ++j) {
      x[j] = spec.means[j] + std::sqrt(spec.variances[j]) * rng.next_normal();
    }
    Params p = Params::from_array(x);
    ParamArray g = neg_log_posterior_grad(p, ds, spec);
    for (std::size_t j = 0; j < Params::count; ++j) {
      double h = 1e-5 * std::max(1.0, std::fabs(x[j]));
      ParamArray lo = x;
      ParamArray hi = x;
      lo[j] -= h;
      hi[j] += h;
      double fd = (neg_log_posterior(Params::from_array(hi), ds, spec) -
                   neg_log_posterior(Params::from_array(lo), ds, spec)) /
                  (2 * h);
      CHECK(std::fabs(fd - g[j]) <=
            1e-5 * std::max(1.0, std::fabs(g[j])));
    }
  }
}

TEST_CASE("invert_for_compute round-trips through predict_accuracy") {
  Params p = testutil::reference_params();
  Rng rng(3);
  for (int i = 0; i < 500; ++i) {
    double dyear = 12 * rng.next_uniform();
    double log_d = 9 * rng.next_uniform();
    double d = p.beta1 + p.beta_year * dyear + p.beta_data * log_d;
    double ceiling = sigmoid(d);
    double target = ceiling * (0.05 + 0.9 * rng.next_uniform());
    double log_c = invert_for_compute(p, dyear, log_d, target);
    NormalizedRecord r{dyear, log_c, log_d, 0};
    CHECK(predict_accuracy(p, r) == doctest::Approx(target).epsilon(1e-9));
  }
}

TEST_CASE("invert_for_compute: unreachable exactly at the data ceiling") {
  Params p = testutil::reference_params();
  double ceiling = sigmoid(p.beta1);  // dyear 0, log_d 0
  CHECK_THROWS_AS(invert_for_compute(p, 0, 0, ceiling), Error);
  CHECK_THROWS_AS(invert_for_compute(p, 0, 0, ceiling + 1e-9), Error);
  CHECK_NOTHROW(invert_for_compute(p, 0, 0, ceiling - 1e-9));

  // 0.85 sits just under sigmoid(1.783) ~ 0.8561, so a finite (large)
  // compute exists; frozen from the closed form
  double log_c = invert_for_compute(p, 0, 0, 0.85);
  CHECK(log_c == doctest::Approx(26.320694404262734).epsilon(1e-10));

  Params degenerate = p;
  degenerate.alpha_compute = 0.0;
  try {
    invert_for_compute(degenerate, 0, 0, 0.5);
    FAIL("expected DegenerateSlope");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateSlope);
  }
}

TEST_CASE("invert_for_compute limit: infinite data needs logit(target)") {
  Params p = testutil::reference_params();
  double log_c = invert_for_compute(p, 0, 1e6, 0.9);
  double expected = (logit(0.9) - p.alpha1) / p.alpha_compute;
  CHECK(log_c == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("chinchilla_approx error bounds") {
  Params unit{0, 0, 1, 0, 0, 1, 0};  // budgets are the raw inputs
  // frozen error at C = D = 4
  NormalizedRecord at4{0, 4, 4, 0};
  double err4 = std::fabs(predict_accuracy(unit, at4) -
                          chinchilla_approx(unit, at4));
  CHECK(err4 == doctest::Approx(9.823616020856861e-4).epsilon(1e-9));
  CHECK(err4 <= 2e-3);

  NormalizedRecord at10{0, 10, 10, 0};
  CHECK(std::fabs(predict_accuracy(unit, at10) -
                  chinchilla_approx(unit, at10)) < 1e-8);

  // outside the validity region the error is large
  NormalizedRecord at0{0, 0, 0, 0};
  CHECK(std::fabs(predict_accuracy(unit, at0) -
                  chinchilla_approx(unit, at0)) > 0.2);
}

TEST_CASE("chinchilla_approx within 2e-3 on the whole C,D >= 4 grid") {
  Params unit{0, 0, 1, 0, 0, 1, 0};
  for (int i = 0; i < 100; ++i) {
    for (int j = 0; j < 100; ++j) {
      double c = 4.0 + 26.0 * i / 99.0;
      double d = 4.0 + 26.0 * j / 99.0;
      NormalizedRecord r{0, c, d, 0};
      CHECK(std::fabs(predict_accuracy(unit, r) - chinchilla_approx(unit, r)) <=
            2e-3);
    }
  }
}
