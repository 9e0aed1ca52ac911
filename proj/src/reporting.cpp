#include "progress_decomp/reporting.hpp"

#include <cmath>

#include "progress_decomp/analysis.hpp"
#include "progress_decomp/attribution.hpp"
#include "progress_decomp/errors.hpp"
#include "progress_decomp/version.hpp"

namespace progress {

Json RunManifest::to_json() const {
  Json j;
  j["subcommand"] = subcommand;
  Json f;
  for (const auto& [key, value] : flags) f[key] = value;
  j["flags"] = f;
  j["master_seed"] = master_seed;
  j["dataset"] = Json{{"path", dataset_path}, {"hash", dataset_hash}};
  j["version"] = kToolVersion;
  return j;
}

const std::vector<std::pair<std::string, std::string>>& default_report_pairs() {
  static const std::vector<std::pair<std::string, std::string>> pairs = {
      {"alexnet", "resnet50"},      {"alexnet", "resnext101"},
      {"alexnet", "bit-l"},         {"alexnet", "vit-h14"},
      {"alexnet", "vit-e"},         {"resnet50", "bit-l"},
      {"resnet50", "vit-h14"},      {"resnet50", "vit-e"},
      {"resnext101", "bit-l"},      {"resnext101", "vit-h14"},
      {"resnext101", "vit-e"}};
  return pairs;
}

namespace {

std::vector<Transition> resolve_pairs(
    const Dataset& ds,
    const std::vector<std::pair<std::string, std::string>>& pairs,
    std::vector<std::string>& old_names, std::vector<std::string>& new_names) {
  std::vector<Transition> transitions;
  for (const auto& [old_name, new_name] : pairs) {
    std::size_t io = ds.find(old_name);
    std::size_t in = ds.find(new_name);
    if (io == Dataset::npos || in == Dataset::npos) {
      throw Error(ErrorCode::DomainViolation,
                  "model pair '" + old_name + ":" + new_name +
                      "' not found in the dataset");
    }
    transitions.push_back({ds.records[io], ds.records[in]});
    old_names.push_back(old_name);
    new_names.push_back(new_name);
  }
  return transitions;
}

Json table1(const FitResult& fit, const BootstrapEnsemble& ens, double level) {
  Json rows = Json::array();
  ParamArray point = fit.params.to_array();
  for (std::size_t j = 0; j < Params::count; ++j) {
    auto pick = [j](const Params& p) { return p.to_array()[j]; };
    auto [lo, hi] = percentile_ci(ens, pick, level);
    rows.push_back(Json{{"param", Params::names()[j]},
                        {"estimate", point[j]},
                        {"std_error", ensemble_std(ens, pick)},
                        {"ci_lo", lo},
                        {"ci_hi", hi},
                        {"ensemble_mean", ensemble_mean(ens, pick)}});
  }
  return rows;
}

std::string table1_csv(const Json& rows) {
  std::string out = "param,estimate,std_error,ci_lo,ci_hi,ensemble_mean\n";
  for (const auto& r : rows) {
    out += r.at("param").get<std::string>() + "," +
           format_double(r.at("estimate").get<double>()) + "," +
           format_double(r.at("std_error").get<double>()) + "," +
           format_double(r.at("ci_lo").get<double>()) + "," +
           format_double(r.at("ci_hi").get<double>()) + "," +
           format_double(r.at("ensemble_mean").get<double>()) + "\n";
  }
  return out;
}

}  // namespace

ReportBundle report_tables(const FitResult& fit, const BootstrapEnsemble& ens,
                           const Dataset& ds, const ReportOptions& options) {
  if (fit.dataset_hash != ds.source_hash ||
      ens.dataset_hash != ds.source_hash) {
    throw Error(ErrorCode::HashMismatch,
                "fit/ensemble were built from a different dataset");
  }

  ReportBundle bundle;
  Json& doc = bundle.document;
  doc["schema"] = "progress-decomp/report/1";
  doc["version"] = kToolVersion;
  doc["dataset_hash"] = ds.source_hash;
  doc["n_records"] = ds.size();

  // Table 1: parameter estimates with bootstrap spread.
  Json t1 = table1(fit, ens, options.ci_level);
  doc["table1"] = Json{{"ci_level", options.ci_level},
                       {"rows", t1},
                       {"log_likelihood", fit.log_likelihood},
                       {"objective", fit.objective}};
  bundle.csv_tables["table1.csv"] = table1_csv(t1);

  // Attribution tables over the model pairs, both player sets and metrics.
  const auto& pairs = options.pairs.empty() ? default_report_pairs()
                                            : options.pairs;
  std::vector<std::string> old_names;
  std::vector<std::string> new_names;
  std::vector<Transition> transitions =
      resolve_pairs(ds, pairs, old_names, new_names);

  struct Spec {
    const char* key;
    PlayerSet players;
    Metric metric;
  };
  const Spec specs[] = {
      {"table2_linear", PlayerSet::three, Metric::linear},
      {"table2_logodds", PlayerSet::three, Metric::log_odds},
      {"table3_linear", PlayerSet::four, Metric::linear},
      {"table3_logodds", PlayerSet::four, Metric::log_odds},
  };
  for (const auto& spec : specs) {
    auto rows = attribution_table(fit.params, transitions, spec.players,
                                  spec.metric);
    doc[spec.key] = attribution_table_to_json(old_names, new_names, rows);
    bundle.csv_tables[std::string(spec.key) + ".csv"] =
        attribution_table_to_csv(old_names, new_names, rows);
  }

  // Table 4: threshold halving times; unreachable thresholds are reported,
  // not dropped silently.
  Json t4 = Json::array();
  std::string t4_csv = "threshold,halving_time_months,status\n";
  for (double threshold : options.thresholds) {
    Json row;
    row["threshold"] = threshold;
    try {
      double months =
          threshold_halving_time(fit.params, threshold, options.log_d_fixed,
                                 options.year_a, options.year_b);
      row["halving_time_months"] = months;
      row["status"] = "ok";
      t4_csv += format_double(threshold) + "," + format_double(months) +
                ",ok\n";
    } catch (const Error& e) {
      row["halving_time_months"] = nullptr;
      row["status"] = std::string(error_code_name(e.code()));
      t4_csv += format_double(threshold) + ",," +
                std::string(error_code_name(e.code())) + "\n";
    }
    t4.push_back(row);
  }
  doc["table4"] = Json{{"year_a", options.year_a},
                       {"year_b", options.year_b},
                       {"log_d_fixed", options.log_d_fixed},
                       {"rows", t4}};
  bundle.csv_tables["table4.csv"] = t4_csv;

  // Headline scalars.
  DoublingTime dt = doubling_time(fit.params);
  auto dt_months = [](const Params& p) { return doubling_time(p).months; };
  auto [dt_lo, dt_hi] = percentile_ci(ens, dt_months, options.ci_level);
  ExpansionRate comp = budget_expansion_rate(fit.params, Branch::compute);
  ExpansionRate data = budget_expansion_rate(fit.params, Branch::data);
  BudgetGrowth growth = effective_budget_growth(fit.params, ds);
  doc["headline"] = Json{
      {"doubling_time",
       Json{{"point_years", dt.years},
            {"point_months", dt.months},
            {"nonpositive_progress", dt.nonpositive_progress},
            {"bootstrap_mean_months", ensemble_mean(ens, dt_months)},
            {"ci_level", options.ci_level},
            {"ci_months", Json::array({dt_lo, dt_hi})}}},
      {"expansion_rate_compute",
       Json{{"ratio", comp.ratio},
            {"exp_ratio_minus_one", comp.exp_ratio_minus_one}}},
      {"expansion_rate_data",
       Json{{"ratio", data.ratio},
            {"exp_ratio_minus_one", data.exp_ratio_minus_one}}},
      {"budget_growth", Json{{"delta_compute", growth.delta_compute},
                             {"delta_data", growth.delta_data},
                             {"ratio", growth.ratio}}},
      {"bootstrap", Json{{"n_fits", ens.fits.size()},
                         {"n_requested", ens.n_requested},
                         {"n_failed", ens.n_failed}}}};

  // Range containment of the central fit in the ensemble, reported per
  // parameter rather than assumed.
  Json containment = Json::array();
  ParamArray point = fit.params.to_array();
  for (std::size_t j = 0; j < Params::count; ++j) {
    auto pick = [j](const Params& p) { return p.to_array()[j]; };
    auto [mn, mx] = percentile_ci(ens, pick, 1.0);
    containment.push_back(Json{{"param", Params::names()[j]},
                               {"within_ensemble_range",
                                point[j] >= mn && point[j] <= mx}});
  }
  doc["fit_within_ensemble_range"] = containment;

  return bundle;
}

}  // namespace progress
