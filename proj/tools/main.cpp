// progress-decomp: fits the joint scaling model of benchmark progress,
// decomposes improvements into compute/data/algorithmic contributions, and
// emits machine-readable reports.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "progress_decomp/analysis.hpp"
#include "progress_decomp/attribution.hpp"
#include "progress_decomp/compute_estimation.hpp"
#include "progress_decomp/data_ingest.hpp"
#include "progress_decomp/errors.hpp"
#include "progress_decomp/estimation.hpp"
#include "progress_decomp/reporting.hpp"
#include "progress_decomp/scaling_model.hpp"
#include "progress_decomp/serialize.hpp"
#include "progress_decomp/uncertainty.hpp"
#include "progress_decomp/version.hpp"

namespace {

using progress::Json;

struct Timer {
  std::chrono::steady_clock::time_point start =
      std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start)
        .count();
  }
};

/// Writes the document to `out_path`, or stdout when no path was given.
void emit_document(const Json& doc, const std::string& out_path) {
  std::string text = doc.dump(2);
  text.push_back('\n');
  if (out_path.empty()) {
    std::fwrite(text.data(), 1, text.size(), stdout);
  } else {
    progress::write_text_file(out_path, text);
  }
}

std::string u64_to_string(std::uint64_t v) { return std::to_string(v); }

struct DataFlags {
  std::string path;
  progress::ColumnMap columns;

  void attach(CLI::App* cmd, bool required) {
    auto* opt = cmd->add_option("--data", path, "benchmark records CSV");
    if (required) opt->required();
    cmd->add_option("--col-name", columns.name, "CSV column holding names");
    cmd->add_option("--col-year", columns.year, "CSV column holding years");
    cmd->add_option("--col-compute", columns.compute,
                    "CSV column holding training FLOP");
    cmd->add_option("--col-data", columns.data,
                    "CSV column holding training-set sizes");
    cmd->add_option("--col-accuracy", columns.accuracy,
                    "CSV column holding top-1 accuracies");
  }

  progress::Dataset load() const {
    return progress::load_dataset(path, columns);
  }

  void echo(std::map<std::string, std::string>& flags) const {
    flags["data"] = path;
    flags["col-name"] = columns.name;
    flags["col-year"] = columns.year;
    flags["col-compute"] = columns.compute;
    flags["col-data"] = columns.data;
    flags["col-accuracy"] = columns.accuracy;
  }
};

struct FitFlags {
  std::uint64_t seed = 0;
  int starts = 64;
  double slope_var = 0.09;
  double intercept_var = 1.0;
  int threads = 0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--seed", seed, "master seed (64-bit)");
    cmd->add_option("--starts", starts, "number of optimizer starts")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--prior-slope-var", slope_var,
                    "prior variance for the four slope coefficients")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--prior-intercept-var", intercept_var,
                    "prior variance for intercepts and log delta")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--threads", threads,
                    "worker threads (0 = hardware concurrency)");
  }

  progress::PriorSpec prior() const {
    return progress::PriorSpec::with_variances(intercept_var, slope_var);
  }

  progress::FitConfig config() const {
    progress::FitConfig cfg;
    cfg.n_starts = starts;
    cfg.master_seed = seed;
    return cfg;
  }

  void echo(std::map<std::string, std::string>& flags) const {
    flags["seed"] = u64_to_string(seed);
    flags["starts"] = std::to_string(starts);
    flags["prior-slope-var"] = progress::format_double(slope_var);
    flags["prior-intercept-var"] = progress::format_double(intercept_var);
    flags["threads"] = std::to_string(threads);
  }
};

std::vector<std::pair<std::string, std::string>> parse_pairs(
    const std::vector<std::string>& specs) {
  std::vector<std::pair<std::string, std::string>> pairs;
  for (const auto& spec : specs) {
    std::size_t colon = spec.find(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 == spec.size()) {
      throw progress::Error(progress::ErrorCode::UsageError,
                            "pair must look like old_name:new_name, got '" +
                                spec + "'");
    }
    pairs.emplace_back(spec.substr(0, colon), spec.substr(colon + 1));
  }
  return pairs;
}

std::string join_specs(const std::vector<std::string>& specs) {
  std::string out;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    if (i) out.push_back(',');
    out += specs[i];
  }
  return out;
}

std::vector<progress::Transition> resolve_named_pairs(
    const progress::Dataset& ds,
    const std::vector<std::pair<std::string, std::string>>& pairs,
    std::vector<std::string>& old_names, std::vector<std::string>& new_names) {
  std::vector<progress::Transition> transitions;
  for (const auto& [oname, nname] : pairs) {
    std::size_t io = ds.find(oname);
    std::size_t in = ds.find(nname);
    if (io == progress::Dataset::npos || in == progress::Dataset::npos) {
      throw progress::Error(progress::ErrorCode::DomainViolation,
                            "model pair '" + oname + ":" + nname +
                                "' not found in the dataset");
    }
    transitions.push_back({ds.records[io], ds.records[in]});
    old_names.push_back(oname);
    new_names.push_back(nname);
  }
  return transitions;
}

int run_cli(int argc, char** argv) {
  CLI::App app{"Scaling-law decomposition of image-classifier progress"};
  app.set_version_flag("--version", progress::kToolVersion);
  app.require_subcommand(1);
  app.set_config("--config")
      ->envname("PROGRESS_DECOMP_CONFIG")
      ->description("flat key-value config file; flags override it");

  Timer timer;

  // ---- estimate-compute --------------------------------------------------
  auto* ec = app.add_subcommand(
      "estimate-compute", "estimate training compute from counts or GPU time");
  struct {
    std::optional<double> forward_flop, epochs, examples, n_batches, batch_size;
    std::optional<double> seconds, n_cores, peak_flops, utilization;
    std::optional<double> days, n_gpus;
    std::string out;
  } ecf;
  ec->add_option("--forward-flop", ecf.forward_flop, "FLOP per forward pass");
  ec->add_option("--epochs", ecf.epochs, "training epochs");
  ec->add_option("--examples", ecf.examples, "examples per epoch");
  ec->add_option("--n-batches", ecf.n_batches, "batches per epoch");
  ec->add_option("--batch-size", ecf.batch_size, "examples per batch");
  ec->add_option("--seconds", ecf.seconds, "training wall time, seconds");
  ec->add_option("--n-cores", ecf.n_cores, "device count");
  ec->add_option("--peak-flops", ecf.peak_flops, "peak device FLOP/s");
  ec->add_option("--utilization", ecf.utilization,
                 "utilization fraction in (0,1]; 0.3 when omitted");
  ec->add_option("--days", ecf.days, "elapsed training days");
  ec->add_option("--n-gpus", ecf.n_gpus, "GPUs used (with --days)");
  ec->add_option("--out", ecf.out, "output JSON path (default stdout)");
  ec->callback([&] {
    Json doc;
    doc["schema"] = "progress-decomp/compute-estimate/1";
    doc["version"] = progress::kToolVersion;
    Json inputs;
    if (ecf.forward_flop.has_value()) {
      if (ecf.seconds.has_value() || ecf.days.has_value()) {
        throw progress::Error(progress::ErrorCode::UsageError,
                              "give inputs for exactly one method");
      }
      progress::OpCountInputs in;
      in.forward_flop = *ecf.forward_flop;
      in.epochs = ecf.epochs.value_or(0.0);
      in.examples = ecf.examples;
      in.n_batches = ecf.n_batches;
      in.batch_size = ecf.batch_size;
      doc["method"] = "op_count";
      doc["flop"] = progress::estimate_by_op_counting(in);
      inputs["forward_flop"] = in.forward_flop;
      inputs["epochs"] = in.epochs;
      if (in.examples) inputs["examples"] = *in.examples;
      if (in.n_batches) inputs["n_batches"] = *in.n_batches;
      if (in.batch_size) inputs["batch_size"] = *in.batch_size;
    } else if (ecf.seconds.has_value() || ecf.days.has_value()) {
      progress::GpuTimeInputs in;
      if (ecf.days.has_value()) {
        double gd = progress::gpu_days(*ecf.days, ecf.n_gpus.value_or(1.0));
        in.seconds = *ecf.days * 86400.0;
        in.n_cores = ecf.n_gpus.value_or(1.0);
        doc["gpu_days"] = gd;
      } else {
        in.seconds = *ecf.seconds;
        in.n_cores = ecf.n_cores.value_or(1.0);
      }
      in.peak_flops = ecf.peak_flops.value_or(0.0);
      in.utilization = ecf.utilization;
      doc["method"] = "gpu_time";
      doc["flop"] = progress::estimate_by_gpu_time(in);
      inputs["seconds"] = in.seconds;
      inputs["n_cores"] = in.n_cores;
      inputs["peak_flops"] = in.peak_flops;
      inputs["utilization"] =
          in.utilization.value_or(progress::kDefaultUtilization);
    } else {
      throw progress::Error(
          progress::ErrorCode::UsageError,
          "give --forward-flop (method 1) or --seconds/--days (method 2)");
    }
    doc["inputs"] = inputs;
    emit_document(doc, ecf.out);
  });

  // ---- fit -----------------------------------------------------------------
  auto* fit_cmd = app.add_subcommand("fit", "MAP fit of the scaling model");
  struct {
    DataFlags data;
    FitFlags fit;
    std::string out;
  } ff;
  ff.data.attach(fit_cmd, true);
  ff.fit.attach(fit_cmd);
  fit_cmd->add_option("--out", ff.out, "output JSON path (default stdout)");
  fit_cmd->callback([&] {
    progress::Dataset ds = ff.data.load();
    progress::FitResult fit =
        progress::fit_map(ds, ff.fit.prior(), ff.fit.config(), ff.fit.threads);
    progress::RunManifest manifest;
    manifest.subcommand = "fit";
    ff.data.echo(manifest.flags);
    ff.fit.echo(manifest.flags);
    manifest.flags["out"] = ff.out;
    manifest.master_seed = ff.fit.seed;
    manifest.dataset_path = ff.data.path;
    manifest.dataset_hash = ds.source_hash;
    Json doc = progress::fit_result_to_json(fit);
    doc["n_records"] = ds.size();
    doc["manifest"] = manifest.to_json();
    emit_document(doc, ff.out);
    std::fprintf(stderr,
                 "fit: %zu records, objective %.6f, log-likelihood %.6f, "
                 "%d/%d starts converged, %zu distinct optima [%.2fs]\n",
                 ds.size(), fit.objective, fit.log_likelihood,
                 fit.starts_converged, fit.starts_requested,
                 fit.distinct_optima.size(), timer.seconds());
  });

  // ---- bootstrap -----------------------------------------------------------
  auto* boot_cmd =
      app.add_subcommand("bootstrap", "nonparametric bootstrap over records");
  struct {
    DataFlags data;
    FitFlags fit;
    int n = 100;
    std::string out;
    std::string csv;
  } bf;
  bf.data.attach(boot_cmd, true);
  bf.fit.attach(boot_cmd);
  boot_cmd->add_option("--bootstrap-n", bf.n, "number of replicates")
      ->check(CLI::PositiveNumber);
  boot_cmd->add_option("--out", bf.out, "output JSON path (default stdout)");
  boot_cmd->add_option("--csv", bf.csv,
                       "also write a replicate-by-parameter CSV matrix");
  boot_cmd->callback([&] {
    progress::Dataset ds = bf.data.load();
    progress::BootstrapEnsemble ens =
        progress::bootstrap(ds, bf.fit.prior(), bf.fit.config(), bf.n,
                            bf.fit.seed, bf.fit.threads);
    progress::RunManifest manifest;
    manifest.subcommand = "bootstrap";
    bf.data.echo(manifest.flags);
    bf.fit.echo(manifest.flags);
    manifest.flags["bootstrap-n"] = std::to_string(bf.n);
    manifest.flags["out"] = bf.out;
    manifest.flags["csv"] = bf.csv;
    manifest.master_seed = bf.fit.seed;
    manifest.dataset_path = bf.data.path;
    manifest.dataset_hash = ds.source_hash;
    Json doc = progress::ensemble_to_json(ens);
    doc["manifest"] = manifest.to_json();
    emit_document(doc, bf.out);
    if (!bf.csv.empty()) {
      progress::write_text_file(bf.csv, progress::ensemble_to_csv(ens));
    }
    std::fprintf(stderr, "bootstrap: %zu/%d replicates converged [%.2fs]\n",
                 ens.fits.size(), bf.n, timer.seconds());
  });

  // ---- attribute -----------------------------------------------------------
  auto* attr_cmd = app.add_subcommand(
      "attribute", "Shapley attribution of progress between model pairs");
  struct {
    DataFlags data;
    std::string fit_path;
    std::vector<std::string> pairs;
    int players = 3;
    std::string metric = "linear";
    std::string out;
    std::string csv;
  } af;
  af.data.attach(attr_cmd, true);
  attr_cmd->add_option("--fit", af.fit_path, "fit result JSON")->required();
  attr_cmd->add_option("--pairs", af.pairs,
                       "model pairs old_name:new_name (comma separated); "
                       "defaults to the canonical table pairs")
      ->delimiter(',');
  attr_cmd->add_option("--players", af.players, "3 or 4 players")
      ->check(CLI::IsMember({3, 4}));
  attr_cmd->add_option("--metric", af.metric, "attribution metric")
      ->check(CLI::IsMember({"linear", "logodds"}));
  attr_cmd->add_option("--out", af.out, "output JSON path (default stdout)");
  attr_cmd->add_option("--csv", af.csv, "also write the table as CSV");
  attr_cmd->callback([&] {
    progress::Dataset ds = af.data.load();
    progress::FitResult fit = progress::load_fit_result(af.fit_path);
    if (fit.dataset_hash != ds.source_hash) {
      std::fprintf(stderr,
                   "warning: fit was built from a different dataset (hash "
                   "mismatch)\n");
    }
    auto pairs = af.pairs.empty() ? progress::default_report_pairs()
                                  : parse_pairs(af.pairs);
    std::vector<std::string> old_names;
    std::vector<std::string> new_names;
    auto transitions = resolve_named_pairs(ds, pairs, old_names, new_names);
    auto players = (af.players == 3) ? progress::PlayerSet::three
                                     : progress::PlayerSet::four;
    auto metric = (af.metric == "linear") ? progress::Metric::linear
                                          : progress::Metric::log_odds;
    auto rows =
        progress::attribution_table(fit.params, transitions, players, metric);

    progress::RunManifest manifest;
    manifest.subcommand = "attribute";
    af.data.echo(manifest.flags);
    manifest.flags["fit"] = af.fit_path;
    manifest.flags["pairs"] = join_specs(af.pairs);
    manifest.flags["players"] = std::to_string(af.players);
    manifest.flags["metric"] = af.metric;
    manifest.flags["out"] = af.out;
    manifest.flags["csv"] = af.csv;
    manifest.dataset_path = af.data.path;
    manifest.dataset_hash = ds.source_hash;

    Json doc;
    doc["schema"] = "progress-decomp/attribution-table/1";
    doc["version"] = progress::kToolVersion;
    doc["params"] = progress::params_to_json(fit.params);
    doc["rows"] =
        progress::attribution_table_to_json(old_names, new_names, rows);
    doc["manifest"] = manifest.to_json();
    emit_document(doc, af.out);
    if (!af.csv.empty()) {
      progress::write_text_file(
          af.csv,
          progress::attribution_table_to_csv(old_names, new_names, rows));
    }
  });

  // ---- doubling-time ---------------------------------------------------
  auto* dt_cmd = app.add_subcommand(
      "doubling-time",
      "doubling time of effective compute from year-driven progress");
  struct {
    std::string fit_path;
    std::string ensemble_path;
    double ci_level = 0.95;
    std::string out;
  } df;
  dt_cmd->add_option("--fit", df.fit_path, "fit result JSON")->required();
  dt_cmd->add_option("--ensemble", df.ensemble_path,
                     "bootstrap ensemble JSON (adds mean and CI)");
  dt_cmd->add_option("--ci-level", df.ci_level, "confidence level")
      ->check(CLI::Range(0.0, 1.0));
  dt_cmd->add_option("--out", df.out, "output JSON path (default stdout)");
  dt_cmd->callback([&] {
    progress::FitResult fit = progress::load_fit_result(df.fit_path);
    progress::DoublingTime dt = progress::doubling_time(fit.params);
    progress::ExpansionRate comp =
        progress::budget_expansion_rate(fit.params, progress::Branch::compute);
    progress::ExpansionRate data =
        progress::budget_expansion_rate(fit.params, progress::Branch::data);

    progress::RunManifest manifest;
    manifest.subcommand = "doubling-time";
    manifest.flags["fit"] = df.fit_path;
    manifest.flags["ensemble"] = df.ensemble_path;
    manifest.flags["ci-level"] = progress::format_double(df.ci_level);
    manifest.flags["out"] = df.out;
    manifest.dataset_hash = fit.dataset_hash;

    Json doc;
    doc["schema"] = "progress-decomp/doubling-time/1";
    doc["version"] = progress::kToolVersion;
    doc["point_years"] = dt.years;
    doc["point_months"] = dt.months;
    doc["nonpositive_progress"] = dt.nonpositive_progress;
    doc["expansion_rate_compute"] =
        Json{{"ratio", comp.ratio},
             {"exp_ratio_minus_one", comp.exp_ratio_minus_one}};
    doc["expansion_rate_data"] =
        Json{{"ratio", data.ratio},
             {"exp_ratio_minus_one", data.exp_ratio_minus_one}};
    if (!df.ensemble_path.empty()) {
      progress::BootstrapEnsemble ens =
          progress::load_ensemble(df.ensemble_path);
      auto months = [](const progress::Params& p) {
        return progress::doubling_time(p).months;
      };
      auto [lo, hi] = progress::percentile_ci(ens, months, df.ci_level);
      doc["bootstrap"] =
          Json{{"mean_months", progress::ensemble_mean(ens, months)},
               {"ci_level", df.ci_level},
               {"ci_months", Json::array({lo, hi})},
               {"n_fits", ens.fits.size()}};
    }
    doc["manifest"] = manifest.to_json();
    emit_document(doc, df.out);
  });

  // ---- thresholds ----------------------------------------------------------
  auto* th_cmd = app.add_subcommand(
      "thresholds",
      "halving time of required compute at fixed accuracy thresholds");
  struct {
    std::string fit_path;
    std::vector<double> thresholds = {0.60, 0.70, 0.80, 0.84, 0.88};
    double year_a = 2012.0;
    double year_b = 2022.0;
    double log_d_fixed = 0.0;
    bool freeze_beta_year = false;
    bool instant = false;
    std::string out;
  } tf;
  th_cmd->add_option("--fit", tf.fit_path, "fit result JSON")->required();
  th_cmd->add_option("--threshold", tf.thresholds,
                     "accuracy thresholds (comma separated)")
      ->delimiter(',');
  th_cmd->add_option("--year-a", tf.year_a, "interval start year");
  th_cmd->add_option("--year-b", tf.year_b, "interval end year");
  th_cmd->add_option("--log-d-fixed", tf.log_d_fixed,
                     "fixed normalized log data budget");
  th_cmd->add_flag("--freeze-beta-year", tf.freeze_beta_year,
                   "hold the data branch's year term at year-a");
  th_cmd->add_flag("--instant", tf.instant,
                   "instantaneous rate at year-a instead of the interval");
  th_cmd->add_option("--out", tf.out, "output JSON path (default stdout)");
  th_cmd->callback([&] {
    progress::FitResult fit = progress::load_fit_result(tf.fit_path);

    progress::RunManifest manifest;
    manifest.subcommand = "thresholds";
    manifest.flags["fit"] = tf.fit_path;
    manifest.flags["year-a"] = progress::format_double(tf.year_a);
    manifest.flags["year-b"] = progress::format_double(tf.year_b);
    manifest.flags["log-d-fixed"] = progress::format_double(tf.log_d_fixed);
    manifest.flags["freeze-beta-year"] =
        tf.freeze_beta_year ? "true" : "false";
    manifest.flags["instant"] = tf.instant ? "true" : "false";
    manifest.flags["out"] = tf.out;
    manifest.dataset_hash = fit.dataset_hash;

    Json rows = Json::array();
    for (double threshold : tf.thresholds) {
      Json row;
      row["threshold"] = threshold;
      try {
        double months =
            tf.instant ? progress::threshold_halving_time_instant(
                             fit.params, threshold, tf.log_d_fixed, tf.year_a,
                             tf.freeze_beta_year)
                       : progress::threshold_halving_time(
                             fit.params, threshold, tf.log_d_fixed, tf.year_a,
                             tf.year_b, tf.freeze_beta_year);
        row["halving_time_months"] = months;
        row["status"] = "ok";
      } catch (const progress::Error& e) {
        if (e.code() != progress::ErrorCode::Unreachable &&
            e.code() != progress::ErrorCode::NoImprovement) {
          throw;
        }
        row["halving_time_months"] = nullptr;
        row["status"] = std::string(progress::error_code_name(e.code()));
      }
      rows.push_back(row);
    }
    Json doc;
    doc["schema"] = "progress-decomp/thresholds/1";
    doc["version"] = progress::kToolVersion;
    doc["year_a"] = tf.year_a;
    doc["year_b"] = tf.year_b;
    doc["log_d_fixed"] = tf.log_d_fixed;
    doc["freeze_beta_year"] = tf.freeze_beta_year;
    doc["instant"] = tf.instant;
    doc["rows"] = rows;
    doc["manifest"] = manifest.to_json();
    emit_document(doc, tf.out);
  });

  // ---- pareto ----------------------------------------------------------
  auto* pareto_cmd = app.add_subcommand(
      "pareto", "iso-performance frontier in (data, compute) space");
  struct {
    std::string fit_path;
    DataFlags data;
    double target = 0.0;
    double year = 2022.0;
    double grid_min = 0.0;
    double grid_max = 8.0;
    int grid_steps = 81;
    std::string out;
    std::string csv;
  } pf;
  pareto_cmd->add_option("--fit", pf.fit_path, "fit result JSON")->required();
  pf.data.attach(pareto_cmd, false);
  pareto_cmd->add_option("--threshold", pf.target, "target top-1 accuracy")
      ->required()
      ->check(CLI::Range(0.0, 1.0));
  pareto_cmd->add_option("--year-a", pf.year, "frontier year");
  pareto_cmd->add_option("--grid-min", pf.grid_min, "log_d grid start");
  pareto_cmd->add_option("--grid-max", pf.grid_max, "log_d grid end");
  pareto_cmd->add_option("--grid-steps", pf.grid_steps, "grid point count")
      ->check(CLI::PositiveNumber);
  pareto_cmd->add_option("--out", pf.out, "output JSON path (default stdout)");
  pareto_cmd->add_option("--csv", pf.csv, "also write the frontier as CSV");
  pareto_cmd->callback([&] {
    progress::FitResult fit = progress::load_fit_result(pf.fit_path);
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(pf.grid_steps));
    for (int i = 0; i < pf.grid_steps; ++i) {
      double t = (pf.grid_steps == 1)
                     ? 0.0
                     : static_cast<double>(i) / (pf.grid_steps - 1);
      grid.push_back(pf.grid_min + t * (pf.grid_max - pf.grid_min));
    }
    progress::ParetoFrontier frontier =
        progress::pareto_frontier(fit.params, pf.target, pf.year, grid);

    progress::RunManifest manifest;
    manifest.subcommand = "pareto";
    manifest.flags["fit"] = pf.fit_path;
    manifest.flags["threshold"] = progress::format_double(pf.target);
    manifest.flags["year-a"] = progress::format_double(pf.year);
    manifest.flags["grid-min"] = progress::format_double(pf.grid_min);
    manifest.flags["grid-max"] = progress::format_double(pf.grid_max);
    manifest.flags["grid-steps"] = std::to_string(pf.grid_steps);
    manifest.flags["out"] = pf.out;
    manifest.flags["csv"] = pf.csv;
    manifest.dataset_hash = fit.dataset_hash;

    Json doc = progress::frontier_to_json(frontier);
    progress::NormConstants refs;
    if (!pf.data.path.empty()) {
      progress::Dataset ds = pf.data.load();
      refs = ds.refs;
      std::size_t outside = 0;
      for (const auto& pt : frontier.points) {
        progress::NormalizedRecord q{pt.year - 2012.0, pt.log_c, pt.log_d,
                                     0.0};
        if (!progress::within_dataset_hull(ds, q)) outside += 1;
      }
      doc["extrapolation"] = Json{{"points_outside_dataset_hull", outside},
                                  {"warning", outside > 0}};
      if (outside > 0) {
        std::fprintf(stderr,
                     "warning: %zu/%zu frontier points extrapolate beyond the "
                     "dataset's convex hull\n",
                     outside, frontier.points.size());
      }
    }
    doc["manifest"] = manifest.to_json();
    emit_document(doc, pf.out);
    if (!pf.csv.empty()) {
      progress::write_text_file(pf.csv,
                                progress::frontier_to_csv(frontier, refs));
    }
  });

  // ---- predict ---------------------------------------------------------
  auto* pred_cmd = app.add_subcommand(
      "predict", "predictive accuracy distribution for one configuration");
  struct {
    std::string ensemble_path;
    DataFlags data;
    double year = 0.0;
    double compute = 0.0;
    double data_size = 0.0;
    int draws = 10000;
    std::uint64_t seed = 0;
    std::string out;
    std::string csv;
  } prf;
  pred_cmd
      ->add_option("--ensemble", prf.ensemble_path, "bootstrap ensemble JSON")
      ->required();
  prf.data.attach(pred_cmd, false);
  pred_cmd->add_option("--year", prf.year, "calendar year")->required();
  pred_cmd->add_option("--compute-flop", prf.compute, "training FLOP")
      ->required()
      ->check(CLI::PositiveNumber);
  pred_cmd->add_option("--dataset-size", prf.data_size, "training images")
      ->required()
      ->check(CLI::PositiveNumber);
  pred_cmd->add_option("--draws", prf.draws, "posterior-predictive draws")
      ->check(CLI::PositiveNumber);
  pred_cmd->add_option("--seed", prf.seed, "master seed (64-bit)");
  pred_cmd->add_option("--out", prf.out, "output JSON path (default stdout)");
  pred_cmd->add_option("--csv", prf.csv, "also write quantiles as CSV");
  pred_cmd->callback([&] {
    progress::BootstrapEnsemble ens =
        progress::load_ensemble(prf.ensemble_path);
    progress::NormConstants refs;
    progress::ModelRecord raw{"query", prf.year, prf.compute, prf.data_size,
                              0.5};
    progress::NormalizedRecord rec = progress::normalize(raw, refs);
    rec.logit_p = 0.0;  // no observation attached to a prediction query
    progress::PredictiveSummary summary =
        progress::predictive_distribution(ens, rec, prf.draws, prf.seed);

    progress::RunManifest manifest;
    manifest.subcommand = "predict";
    manifest.flags["ensemble"] = prf.ensemble_path;
    manifest.flags["year"] = progress::format_double(prf.year);
    manifest.flags["compute-flop"] = progress::format_double(prf.compute);
    manifest.flags["dataset-size"] = progress::format_double(prf.data_size);
    manifest.flags["draws"] = std::to_string(prf.draws);
    manifest.flags["seed"] = u64_to_string(prf.seed);
    manifest.flags["out"] = prf.out;
    manifest.flags["csv"] = prf.csv;
    manifest.master_seed = prf.seed;
    manifest.dataset_hash = ens.dataset_hash;

    Json doc = progress::predictive_to_json(summary);
    if (!prf.data.path.empty()) {
      progress::Dataset ds = prf.data.load();
      bool inside = progress::within_dataset_hull(ds, rec);
      doc["extrapolation"] =
          Json{{"within_dataset_hull", inside}, {"warning", !inside}};
      if (!inside) {
        std::fprintf(stderr,
                     "warning: query lies outside the dataset's convex hull; "
                     "the model may not extrapolate well\n");
      }
    }
    doc["manifest"] = manifest.to_json();
    emit_document(doc, prf.out);
    if (!prf.csv.empty()) {
      progress::write_text_file(prf.csv, progress::predictive_to_csv(summary));
    }
  });

  // ---- report-tables ---------------------------------------------------
  auto* rep_cmd = app.add_subcommand(
      "report-tables", "reproduce the headline tables from fit artifacts");
  struct {
    DataFlags data;
    std::string fit_path;
    std::string ensemble_path;
    FitFlags fit;  // used when the ensemble must be computed here
    int bootstrap_n = 100;
    double ci_level = 0.95;
    std::vector<double> thresholds = {0.60, 0.70, 0.80, 0.84, 0.88};
    double year_a = 2012.0;
    double year_b = 2022.0;
    double log_d_fixed = 0.0;
    std::vector<std::string> pairs;
    std::string out = "report";
  } rf;
  rf.data.attach(rep_cmd, true);
  rep_cmd->add_option("--fit", rf.fit_path, "fit result JSON")->required();
  rep_cmd->add_option("--ensemble", rf.ensemble_path,
                      "bootstrap ensemble JSON; computed here when omitted");
  rf.fit.attach(rep_cmd);
  rep_cmd
      ->add_option("--bootstrap-n", rf.bootstrap_n,
                   "replicates when computing the ensemble")
      ->check(CLI::PositiveNumber);
  rep_cmd->add_option("--ci-level", rf.ci_level, "confidence level")
      ->check(CLI::Range(0.0, 1.0));
  rep_cmd
      ->add_option("--threshold", rf.thresholds, "table-4 accuracy thresholds")
      ->delimiter(',');
  rep_cmd->add_option("--year-a", rf.year_a, "table-4 interval start");
  rep_cmd->add_option("--year-b", rf.year_b, "table-4 interval end");
  rep_cmd->add_option("--log-d-fixed", rf.log_d_fixed,
                      "table-4 fixed log data budget");
  rep_cmd
      ->add_option("--pairs", rf.pairs,
                   "model pairs for tables 2/3 (old:new, comma separated)")
      ->delimiter(',');
  rep_cmd->add_option("--out", rf.out, "output directory");
  rep_cmd->callback([&] {
    progress::Dataset ds = rf.data.load();
    progress::FitResult fit = progress::load_fit_result(rf.fit_path);
    progress::BootstrapEnsemble ens;
    if (!rf.ensemble_path.empty()) {
      ens = progress::load_ensemble(rf.ensemble_path);
    } else {
      ens = progress::bootstrap(ds, fit.prior, fit.config, rf.bootstrap_n,
                                rf.fit.seed, rf.fit.threads);
    }
    progress::ReportOptions options;
    options.ci_level = rf.ci_level;
    options.thresholds = rf.thresholds;
    options.year_a = rf.year_a;
    options.year_b = rf.year_b;
    options.log_d_fixed = rf.log_d_fixed;
    if (!rf.pairs.empty()) options.pairs = parse_pairs(rf.pairs);

    progress::ReportBundle bundle =
        progress::report_tables(fit, ens, ds, options);

    progress::RunManifest manifest;
    manifest.subcommand = "report-tables";
    rf.data.echo(manifest.flags);
    manifest.flags["fit"] = rf.fit_path;
    manifest.flags["ensemble"] = rf.ensemble_path;
    manifest.flags["bootstrap-n"] = std::to_string(rf.bootstrap_n);
    manifest.flags["seed"] = u64_to_string(rf.fit.seed);
    manifest.flags["ci-level"] = progress::format_double(rf.ci_level);
    manifest.flags["year-a"] = progress::format_double(rf.year_a);
    manifest.flags["year-b"] = progress::format_double(rf.year_b);
    manifest.flags["log-d-fixed"] = progress::format_double(rf.log_d_fixed);
    manifest.flags["pairs"] = join_specs(rf.pairs);
    manifest.flags["out"] = rf.out;
    manifest.master_seed = rf.fit.seed;
    manifest.dataset_path = rf.data.path;
    manifest.dataset_hash = ds.source_hash;
    bundle.document["manifest"] = manifest.to_json();

    std::filesystem::create_directories(rf.out);
    emit_document(bundle.document,
                  (std::filesystem::path(rf.out) / "report.json").string());
    for (const auto& [name, content] : bundle.csv_tables) {
      progress::write_text_file(
          (std::filesystem::path(rf.out) / name).string(), content);
    }
    std::fprintf(stderr, "report-tables: wrote %zu files to %s [%.2fs]\n",
                 bundle.csv_tables.size() + 1, rf.out.c_str(),
                 timer.seconds());
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_cli(argc, argv);
  } catch (const progress::Error& e) {
    if (e.code() == progress::ErrorCode::UsageError) {
      std::fprintf(stderr, "usage error: %s\n", e.what());
      return 2;
    }
    Json err;
    err["error"] =
        Json{{"code", std::string(progress::error_code_name(e.code()))},
             {"message", e.what()}};
    std::fprintf(stderr, "%s\n", err.dump().c_str());
    return 1;
  } catch (const std::exception& e) {
    Json err;
    err["error"] = Json{{"code", "InternalError"}, {"message", e.what()}};
    std::fprintf(stderr, "%s\n", err.dump().c_str());
    return 1;
  }
}
