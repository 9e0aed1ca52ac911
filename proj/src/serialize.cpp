#include "progress_decomp/serialize.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "progress_decomp/errors.hpp"
#include "progress_decomp/version.hpp"

namespace progress {

std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

Json params_to_json(const Params& p) {
  Json j;
  ParamArray a = p.to_array();
  for (std::size_t i = 0; i < Params::count; ++i) {
    j[Params::names()[i]] = a[i];
  }
  return j;
}

Params params_from_json(const Json& j) {
  ParamArray a{};
  for (std::size_t i = 0; i < Params::count; ++i) {
    a[i] = j.at(Params::names()[i]).get<double>();
  }
  return Params::from_array(a);
}

Json prior_to_json(const PriorSpec& spec) {
  Json j;
  j["means"] = spec.means;
  j["variances"] = spec.variances;
  return j;
}

PriorSpec prior_from_json(const Json& j) {
  PriorSpec spec;
  auto means = j.at("means").get<std::vector<double>>();
  auto variances = j.at("variances").get<std::vector<double>>();
  if (means.size() != Params::count || variances.size() != Params::count) {
    throw Error(ErrorCode::MalformedValue, "prior arrays must have 7 entries");
  }
  std::copy(means.begin(), means.end(), spec.means.begin());
  std::copy(variances.begin(), variances.end(), spec.variances.begin());
  return spec;
}

Json fit_config_to_json(const FitConfig& cfg) {
  Json j;
  j["n_starts"] = cfg.n_starts;
  j["max_iterations"] = cfg.max_iterations;
  j["tol_objective"] = cfg.tol_objective;
  j["tol_param"] = cfg.tol_param;
  j["master_seed"] = cfg.master_seed;
  return j;
}

FitConfig fit_config_from_json(const Json& j) {
  FitConfig cfg;
  cfg.n_starts = j.at("n_starts").get<int>();
  cfg.max_iterations = j.at("max_iterations").get<int>();
  cfg.tol_objective = j.at("tol_objective").get<double>();
  cfg.tol_param = j.at("tol_param").get<double>();
  cfg.master_seed = j.at("master_seed").get<std::uint64_t>();
  return cfg;
}

Json fit_result_to_json(const FitResult& fit) {
  Json j;
  j["schema"] = "progress-decomp/fit-result/1";
  j["version"] = kToolVersion;
  j["params"] = params_to_json(fit.params);
  j["objective"] = fit.objective;
  j["log_likelihood"] = fit.log_likelihood;
  j["starts"] = Json{{"requested", fit.starts_requested},
                     {"converged", fit.starts_converged}};
  Json optima = Json::array();
  for (const auto& o : fit.distinct_optima) {
    optima.push_back(Json{{"params", params_to_json(o.params)},
                          {"objective", o.objective},
                          {"n_starts", o.n_starts}});
  }
  j["distinct_optima"] = optima;
  j["cluster_thresholds"] = Json{{"param_distance", kClusterParamDistance},
                                 {"objective_gap", kClusterObjectiveGap}};
  j["prior"] = prior_to_json(fit.prior);
  j["config"] = fit_config_to_json(fit.config);
  j["dataset_hash"] = fit.dataset_hash;
  return j;
}

FitResult fit_result_from_json(const Json& j) {
  FitResult fit;
  fit.params = params_from_json(j.at("params"));
  fit.objective = j.at("objective").get<double>();
  fit.log_likelihood = j.at("log_likelihood").get<double>();
  fit.starts_requested = j.at("starts").at("requested").get<int>();
  fit.starts_converged = j.at("starts").at("converged").get<int>();
  for (const auto& o : j.at("distinct_optima")) {
    fit.distinct_optima.push_back({params_from_json(o.at("params")),
                                   o.at("objective").get<double>(),
                                   o.at("n_starts").get<int>()});
  }
  fit.prior = prior_from_json(j.at("prior"));
  fit.config = fit_config_from_json(j.at("config"));
  fit.dataset_hash = j.at("dataset_hash").get<std::string>();
  return fit;
}

Json ensemble_to_json(const BootstrapEnsemble& ens) {
  Json j;
  j["schema"] = "progress-decomp/bootstrap-ensemble/1";
  j["version"] = kToolVersion;
  j["n_requested"] = ens.n_requested;
  j["n_failed"] = ens.n_failed;
  j["master_seed"] = ens.master_seed;
  j["dataset_hash"] = ens.dataset_hash;
  j["prior"] = prior_to_json(ens.prior);
  j["config"] = fit_config_to_json(ens.config);
  Json reps = Json::array();
  for (const auto& fit : ens.fits) {
    reps.push_back(Json{{"params", params_to_json(fit.params)},
                        {"objective", fit.objective},
                        {"log_likelihood", fit.log_likelihood}});
  }
  j["replicates"] = reps;
  return j;
}

BootstrapEnsemble ensemble_from_json(const Json& j) {
  BootstrapEnsemble ens;
  ens.n_requested = j.at("n_requested").get<int>();
  ens.n_failed = j.at("n_failed").get<int>();
  ens.master_seed = j.at("master_seed").get<std::uint64_t>();
  ens.dataset_hash = j.at("dataset_hash").get<std::string>();
  ens.prior = prior_from_json(j.at("prior"));
  ens.config = fit_config_from_json(j.at("config"));
  for (const auto& rep : j.at("replicates")) {
    FitResult fit;
    fit.params = params_from_json(rep.at("params"));
    fit.objective = rep.at("objective").get<double>();
    fit.log_likelihood = rep.at("log_likelihood").get<double>();
    fit.dataset_hash = ens.dataset_hash;
    fit.prior = ens.prior;
    fit.config = ens.config;
    ens.fits.push_back(std::move(fit));
  }
  return ens;
}

std::string ensemble_to_csv(const BootstrapEnsemble& ens) {
  std::string out = "replicate";
  for (const char* name : Params::names()) {
    out.push_back(',');
    out += name;
  }
  out += ",objective\n";
  for (std::size_t r = 0; r < ens.fits.size(); ++r) {
    out += std::to_string(r);
    ParamArray a = ens.fits[r].params.to_array();
    for (double v : a) {
      out.push_back(',');
      out += format_double(v);
    }
    out.push_back(',');
    out += format_double(ens.fits[r].objective);
    out.push_back('\n');
  }
  return out;
}

Json attribution_to_json(const AttributionResult& res) {
  Json j;
  j["players"] = (res.players == PlayerSet::three) ? 3 : 4;
  j["metric"] = (res.metric == Metric::linear) ? "linear" : "logodds";
  j["error_reduction"] = res.error_reduction;
  j["total_change"] = res.total;
  Json per_player = Json::array();
  for (std::size_t i = 0; i < res.values.size(); ++i) {
    Json entry;
    entry["player"] = res.player_names[i];
    entry["value"] = res.values[i];
    if (res.no_scaling[i]) {
      entry["share_percent"] = nullptr;
      entry["no_scaling"] = true;
    } else if (res.shares_defined) {
      entry["share_percent"] = 100.0 * res.shares[i];
      entry["no_scaling"] = false;
    } else {
      entry["share_percent"] = nullptr;
      entry["no_scaling"] = false;
    }
    per_player.push_back(entry);
  }
  j["attribution"] = per_player;
  return j;
}

Json attribution_table_to_json(const std::vector<std::string>& old_names,
                               const std::vector<std::string>& new_names,
                               const std::vector<AttributionResult>& rows) {
  Json arr = Json::array();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    Json row = attribution_to_json(rows[i]);
    Json labeled;
    labeled["old"] = old_names[i];
    labeled["new"] = new_names[i];
    labeled.update(row);
    arr.push_back(labeled);
  }
  return arr;
}

std::string attribution_table_to_csv(
    const std::vector<std::string>& old_names,
    const std::vector<std::string>& new_names,
    const std::vector<AttributionResult>& rows) {
  std::string out = "old,new,error_reduction";
  if (!rows.empty()) {
    for (const auto& name : rows.front().player_names) {
      out += "," + name + "_share_percent";
    }
  }
  out.push_back('\n');
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    out += old_names[i] + "," + new_names[i] + "," +
           format_double(r.error_reduction);
    for (std::size_t k = 0; k < r.values.size(); ++k) {
      out.push_back(',');
      if (r.no_scaling[k] || !r.shares_defined) {
        out += "NS";
      } else {
        out += format_double(100.0 * r.shares[k]);
      }
    }
    out.push_back('\n');
  }
  return out;
}

std::string frontier_to_csv(const ParetoFrontier& frontier,
                            const NormConstants& refs) {
  std::string out =
      "log_d,log_c,data_images,compute_flop,year,target_accuracy\n";
  for (const auto& pt : frontier.points) {
    out += format_double(pt.log_d) + "," + format_double(pt.log_c) + "," +
           format_double(std::exp(pt.log_d) * refs.reference_data) + "," +
           format_double(std::exp(pt.log_c) * refs.reference_compute) + "," +
           format_double(pt.year) + "," + format_double(pt.target) + "\n";
  }
  return out;
}

Json frontier_to_json(const ParetoFrontier& frontier) {
  Json j;
  j["schema"] = "progress-decomp/pareto-frontier/1";
  j["version"] = kToolVersion;
  j["n_unreachable"] = frontier.n_unreachable;
  Json pts = Json::array();
  for (const auto& pt : frontier.points) {
    pts.push_back(Json{{"log_d", pt.log_d},
                       {"log_c", pt.log_c},
                       {"year", pt.year},
                       {"target", pt.target}});
  }
  j["points"] = pts;
  return j;
}

Json predictive_to_json(const PredictiveSummary& summary) {
  Json j;
  j["schema"] = "progress-decomp/predictive-summary/1";
  j["version"] = kToolVersion;
  j["record"] = Json{{"dyear", summary.record.dyear},
                     {"log_c", summary.record.log_c},
                     {"log_d", summary.record.log_d}};
  j["n_draws"] = summary.n_draws;
  j["mean"] = summary.mean;
  Json q = Json::array();
  for (std::size_t i = 0; i < summary.quantiles.size(); ++i) {
    q.push_back(Json{{"level", summary.quantile_levels[i]},
                     {"accuracy", summary.quantiles[i]}});
  }
  j["quantiles"] = q;
  return j;
}

std::string predictive_to_csv(const PredictiveSummary& summary) {
  std::string out = "quantile_level,accuracy\n";
  for (std::size_t i = 0; i < summary.quantiles.size(); ++i) {
    out += format_double(summary.quantile_levels[i]) + "," +
           format_double(summary.quantiles[i]) + "\n";
  }
  out += "mean," + format_double(summary.mean) + "\n";
  return out;
}

FitResult load_fit_result(const std::string& path) {
  Json j = Json::parse(read_text_file(path));
  return fit_result_from_json(j);
}

BootstrapEnsemble load_ensemble(const std::string& path) {
  Json j = Json::parse(read_text_file(path));
  return ensemble_from_json(j);
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorCode::MalformedValue, "cannot write '" + path + "'");
  }
  out << content;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::MalformedValue, "cannot open '" + path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace progress
