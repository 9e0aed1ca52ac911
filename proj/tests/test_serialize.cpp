#include <doctest.h>

#include <cstdlib>

#include "progress_decomp/reporting.hpp"
#include "progress_decomp/serialize.hpp"
#include "progress_decomp/uncertainty.hpp"
#include "test_util.hpp"

using namespace progress;

namespace {

FitConfig quick_config(std::uint64_t seed) {
  FitConfig cfg;
  cfg.n_starts = 6;
  cfg.master_seed = seed;
  return cfg;
}

}  // namespace

TEST_CASE("format_double round-trips exactly") {
  for (double v : {0.1, 1.0 / 3.0, 4.7e17, 1.28e6, -2.16, 1e-300, 8.0562011}) {
    std::string s = format_double(v);
    CHECK(std::strtod(s.c_str(), nullptr) == v);
  }
}

TEST_CASE("params and prior JSON round-trip bit-exactly") {
  Params p = testutil::reference_params();
  Params q = params_from_json(params_to_json(p));
  CHECK(p.to_array() == q.to_array());

  PriorSpec spec = PriorSpec::with_variances(0.7, 0.033);
  spec.means[2] = 0.11;
  PriorSpec back = prior_from_json(prior_to_json(spec));
  CHECK(spec.means == back.means);
  CHECK(spec.variances == back.variances);
}

TEST_CASE("fit result JSON round-trips through files") {
  Params truth = testutil::reference_params();
  Dataset ds = testutil::synthetic_dataset(truth, 25, 7);
  FitResult fit = fit_map(ds, PriorSpec{}, quick_config(13));

  Json j = fit_result_to_json(fit);
  CHECK(j.at("schema") == "progress-decomp/fit-result/1");
  FitResult back = fit_result_from_json(j);
  CHECK(back.params.to_array() == fit.params.to_array());
  CHECK(back.objective == fit.objective);
  CHECK(back.log_likelihood == fit.log_likelihood);
  CHECK(back.dataset_hash == fit.dataset_hash);
  CHECK(back.distinct_optima.size() == fit.distinct_optima.size());
  CHECK(back.config.master_seed == fit.config.master_seed);

  // serialization itself is deterministic
  CHECK(fit_result_to_json(back).dump(2) == j.dump(2));
}

TEST_CASE("ensemble JSON and CSV") {
  Params truth = testutil::reference_params();
  Dataset ds = testutil::synthetic_dataset(truth, 20, 9);
  BootstrapEnsemble ens = bootstrap(ds, PriorSpec{}, quick_config(3), 5, 77);
  Json j = ensemble_to_json(ens);
  BootstrapEnsemble back = ensemble_from_json(j);
  REQUIRE(back.fits.size() == ens.fits.size());
  for (std::size_t i = 0; i < ens.fits.size(); ++i) {
    CHECK(back.fits[i].params.to_array() == ens.fits[i].params.to_array());
  }
  CHECK(back.master_seed == ens.master_seed);

  std::string csv = ensemble_to_csv(ens);
  CHECK(csv.find("replicate,alpha1,") == 0);
  // one header plus one row per replicate
  CHECK(std::count(csv.begin(), csv.end(), '\n') ==
        static_cast<long>(ens.fits.size()) + 1);
}

TEST_CASE("attribution CSV renders NS markers") {
  Params p = testutil::reference_params();
  std::vector<Transition> pairs = {
      {{0, 0, 0, 0.545}, {3.33, 2.036, 0, 1.216}}};
  auto rows = attribution_table(p, pairs, PlayerSet::three, Metric::linear);
  std::string csv = attribution_table_to_csv({"alexnet"}, {"resnet50"}, rows);
  CHECK(csv.find("alexnet,resnet50,") != std::string::npos);
  CHECK(csv.rfind(",NS\n") != std::string::npos);  // unchanged data player
}

TEST_CASE("report bundle carries every table and checks hashes") {
  Params truth = testutil::reference_params();
  Dataset ds = testutil::synthetic_dataset(truth, 30, 21);
  FitResult fit = fit_map(ds, PriorSpec{}, quick_config(5));
  BootstrapEnsemble ens = bootstrap(ds, PriorSpec{}, quick_config(5), 6, 11);

  ReportOptions options;
  options.pairs = {{ds.names[0], ds.names[5]}, {ds.names[2], ds.names[9]}};
  ReportBundle bundle = report_tables(fit, ens, ds, options);
  CHECK(bundle.document.at("schema") == "progress-decomp/report/1");
  CHECK(bundle.document.contains("table1"));
  CHECK(bundle.document.contains("table2_linear"));
  CHECK(bundle.document.contains("table2_logodds"));
  CHECK(bundle.document.contains("table3_linear"));
  CHECK(bundle.document.contains("table3_logodds"));
  CHECK(bundle.document.contains("table4"));
  CHECK(bundle.document.contains("headline"));
  CHECK(bundle.csv_tables.count("table1.csv") == 1);
  CHECK(bundle.csv_tables.count("table4.csv") == 1);

  // table-2 shares sum to ~100% where defined
  for (const auto& row : bundle.document.at("table2_linear")) {
    double sum = 0.0;
    bool defined = true;
    for (const auto& cell : row.at("attribution")) {
      if (cell.at("share_percent").is_null()) {
        defined = cell.at("no_scaling").get<bool>();
        if (!defined) break;
        continue;
      }
      sum += cell.at("share_percent").get<double>();
    }
    if (defined) CHECK(sum == doctest::Approx(100.0).epsilon(1e-9));
  }

  Dataset other = testutil::synthetic_dataset(truth, 30, 22);
  CHECK_THROWS_AS(report_tables(fit, ens, other, options), Error);
}

TEST_CASE("manifest JSON shape") {
  RunManifest manifest;
  manifest.subcommand = "fit";
  manifest.flags = {{"data", "x.csv"}, {"seed", "7"}};
  manifest.master_seed = 7;
  manifest.dataset_path = "x.csv";
  manifest.dataset_hash = "abc";
  Json j = manifest.to_json();
  CHECK(j.at("subcommand") == "fit");
  CHECK(j.at("flags").at("seed") == "7");
  CHECK(j.at("dataset").at("hash") == "abc");
  CHECK(j.contains("version"));
  // wall-clock time never enters output documents
  CHECK(j.dump().find("duration") == std::string::npos);
}
