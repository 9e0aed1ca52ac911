#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "progress_decomp/analysis.hpp"
#include "progress_decomp/attribution.hpp"
#include "progress_decomp/compute_estimation.hpp"
#include "progress_decomp/data_ingest.hpp"
#include "progress_decomp/errors.hpp"
#include "progress_decomp/estimation.hpp"
#include "progress_decomp/reporting.hpp"
#include "progress_decomp/scaling_model.hpp"
#include "progress_decomp/serialize.hpp"
#include "progress_decomp/sha256.hpp"
#include "progress_decomp/uncertainty.hpp"
#include "progress_decomp/version.hpp"

namespace py = pybind11;
using namespace progress;

namespace {

py::object json_to_py(const Json& j) {
  py::module_ json = py::module_::import("json");
  return json.attr("loads")(j.dump());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Scaling-law decomposition of image-classifier progress";
  m.attr("__version__") = kToolVersion;

  static py::exception<Error> exc(m, "DomainError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      exc((std::string(error_code_name(e.code())) + ": " + e.what()).c_str());
    }
  });

  py::class_<ModelRecord>(m, "ModelRecord")
      .def(py::init<>())
      .def(py::init([](std::string name, double year, double compute,
                       double data, double accuracy) {
             return ModelRecord{std::move(name), year, compute, data,
                                accuracy};
           }),
           py::arg("name"), py::arg("year"), py::arg("compute"),
           py::arg("data"), py::arg("accuracy"))
      .def_readwrite("name", &ModelRecord::name)
      .def_readwrite("year", &ModelRecord::year)
      .def_readwrite("compute", &ModelRecord::compute)
      .def_readwrite("data", &ModelRecord::data)
      .def_readwrite("accuracy", &ModelRecord::accuracy)
      .def("__repr__", [](const ModelRecord& r) {
        return "ModelRecord(name='" + r.name + "', year=" +
               format_double(r.year) + ", compute=" + format_double(r.compute) +
               ", data=" + format_double(r.data) + ", accuracy=" +
               format_double(r.accuracy) + ")";
      });

  py::class_<NormConstants>(m, "NormConstants")
      .def(py::init<>())
      .def_readwrite("reference_year", &NormConstants::reference_year)
      .def_readwrite("reference_compute", &NormConstants::reference_compute)
      .def_readwrite("reference_data", &NormConstants::reference_data);

  py::class_<NormalizedRecord>(m, "NormalizedRecord")
      .def(py::init<>())
      .def(py::init([](double dyear, double log_c, double log_d,
                       double logit_p) {
             return NormalizedRecord{dyear, log_c, log_d, logit_p};
           }),
           py::arg("dyear"), py::arg("log_c"), py::arg("log_d"),
           py::arg("logit_p") = 0.0)
      .def_readwrite("dyear", &NormalizedRecord::dyear)
      .def_readwrite("log_c", &NormalizedRecord::log_c)
      .def_readwrite("log_d", &NormalizedRecord::log_d)
      .def_readwrite("logit_p", &NormalizedRecord::logit_p);

  py::class_<Dataset>(m, "Dataset")
      .def_readonly("names", &Dataset::names)
      .def_readonly("records", &Dataset::records)
      .def_readonly("source_hash", &Dataset::source_hash)
      .def_readonly("refs", &Dataset::refs)
      .def("__len__", &Dataset::size)
      .def("find", [](const Dataset& ds, const std::string& name) -> py::object {
        std::size_t i = ds.find(name);
        if (i == Dataset::npos) return py::none();
        return py::int_(i);
      });

  py::class_<Params>(m, "Params")
      .def(py::init<>())
      .def(py::init([](double a1, double ay, double ac, double b1, double by,
                       double bd, double ld) {
             return Params{a1, ay, ac, b1, by, bd, ld};
           }),
           py::arg("alpha1"), py::arg("alpha_year"), py::arg("alpha_compute"),
           py::arg("beta1"), py::arg("beta_year"), py::arg("beta_data"),
           py::arg("log_delta"))
      .def_readwrite("alpha1", &Params::alpha1)
      .def_readwrite("alpha_year", &Params::alpha_year)
      .def_readwrite("alpha_compute", &Params::alpha_compute)
      .def_readwrite("beta1", &Params::beta1)
      .def_readwrite("beta_year", &Params::beta_year)
      .def_readwrite("beta_data", &Params::beta_data)
      .def_readwrite("log_delta", &Params::log_delta)
      .def("to_list",
           [](const Params& p) {
             ParamArray a = p.to_array();
             return std::vector<double>(a.begin(), a.end());
           })
      .def_static("names", [] {
        const auto& n = Params::names();
        return std::vector<std::string>(n.begin(), n.end());
      });

  py::class_<PriorSpec>(m, "PriorSpec")
      .def(py::init<>())
      .def_static("with_variances", &PriorSpec::with_variances,
                  py::arg("intercept_var"), py::arg("slope_var"))
      .def_property(
          "means",
          [](const PriorSpec& s) {
            return std::vector<double>(s.means.begin(), s.means.end());
          },
          [](PriorSpec& s, const std::vector<double>& v) {
            if (v.size() != Params::count)
              throw Error(ErrorCode::DomainViolation, "need 7 means");
            std::copy(v.begin(), v.end(), s.means.begin());
          })
      .def_property(
          "variances",
          [](const PriorSpec& s) {
            return std::vector<double>(s.variances.begin(), s.variances.end());
          },
          [](PriorSpec& s, const std::vector<double>& v) {
            if (v.size() != Params::count)
              throw Error(ErrorCode::DomainViolation, "need 7 variances");
            std::copy(v.begin(), v.end(), s.variances.begin());
          })
      .def_property_readonly("slope_variance", &PriorSpec::slope_variance);

  py::class_<FitConfig>(m, "FitConfig")
      .def(py::init<>())
      .def_readwrite("n_starts", &FitConfig::n_starts)
      .def_readwrite("max_iterations", &FitConfig::max_iterations)
      .def_readwrite("tol_objective", &FitConfig::tol_objective)
      .def_readwrite("tol_param", &FitConfig::tol_param)
      .def_readwrite("master_seed", &FitConfig::master_seed);

  py::class_<Optimum>(m, "Optimum")
      .def_readonly("params", &Optimum::params)
      .def_readonly("objective", &Optimum::objective)
      .def_readonly("n_starts", &Optimum::n_starts);

  py::class_<FitResult>(m, "FitResult")
      .def_readonly("params", &FitResult::params)
      .def_readonly("objective", &FitResult::objective)
      .def_readonly("log_likelihood", &FitResult::log_likelihood)
      .def_readonly("starts_requested", &FitResult::starts_requested)
      .def_readonly("starts_converged", &FitResult::starts_converged)
      .def_readonly("distinct_optima", &FitResult::distinct_optima)
      .def_readonly("dataset_hash", &FitResult::dataset_hash)
      .def("to_json",
           [](const FitResult& fit) { return json_to_py(fit_result_to_json(fit)); });

  py::class_<BootstrapEnsemble>(m, "BootstrapEnsemble")
      .def_readonly("fits", &BootstrapEnsemble::fits)
      .def_readonly("n_requested", &BootstrapEnsemble::n_requested)
      .def_readonly("n_failed", &BootstrapEnsemble::n_failed)
      .def_readonly("master_seed", &BootstrapEnsemble::master_seed)
      .def_readonly("dataset_hash", &BootstrapEnsemble::dataset_hash)
      .def("to_json",
           [](const BootstrapEnsemble& e) { return json_to_py(ensemble_to_json(e)); });

  py::enum_<PlayerSet>(m, "PlayerSet")
      .value("THREE", PlayerSet::three)
      .value("FOUR", PlayerSet::four);

  py::enum_<Metric>(m, "Metric")
      .value("LINEAR", Metric::linear)
      .value("LOG_ODDS", Metric::log_odds);

  py::class_<Transition>(m, "Transition")
      .def(py::init([](NormalizedRecord o, NormalizedRecord n) {
             return Transition{o, n};
           }),
           py::arg("old_record"), py::arg("new_record"))
      .def_readwrite("old_record", &Transition::old_record)
      .def_readwrite("new_record", &Transition::new_record);

  py::class_<AttributionResult>(m, "AttributionResult")
      .def_readonly("player_names", &AttributionResult::player_names)
      .def_readonly("values", &AttributionResult::values)
      .def_readonly("total", &AttributionResult::total)
      .def_readonly("shares", &AttributionResult::shares)
      .def_readonly("shares_defined", &AttributionResult::shares_defined)
      .def_readonly("no_scaling", &AttributionResult::no_scaling)
      .def_readonly("error_reduction", &AttributionResult::error_reduction);

  py::class_<DoublingTime>(m, "DoublingTime")
      .def_readonly("years", &DoublingTime::years)
      .def_readonly("months", &DoublingTime::months)
      .def_readonly("nonpositive_progress",
                    &DoublingTime::nonpositive_progress);

  py::enum_<Branch>(m, "Branch")
      .value("COMPUTE", Branch::compute)
      .value("DATA", Branch::data);

  py::class_<ExpansionRate>(m, "ExpansionRate")
      .def_readonly("ratio", &ExpansionRate::ratio)
      .def_readonly("exp_ratio_minus_one", &ExpansionRate::exp_ratio_minus_one);

  py::class_<FrontierPoint>(m, "FrontierPoint")
      .def_readonly("log_d", &FrontierPoint::log_d)
      .def_readonly("log_c", &FrontierPoint::log_c)
      .def_readonly("year", &FrontierPoint::year)
      .def_readonly("target", &FrontierPoint::target);

  py::class_<ParetoFrontier>(m, "ParetoFrontier")
      .def_readonly("points", &ParetoFrontier::points)
      .def_readonly("n_unreachable", &ParetoFrontier::n_unreachable);

  py::class_<PredictiveSummary>(m, "PredictiveSummary")
      .def_readonly("quantile_levels", &PredictiveSummary::quantile_levels)
      .def_readonly("quantiles", &PredictiveSummary::quantiles)
      .def_readonly("mean", &PredictiveSummary::mean)
      .def_readonly("n_draws", &PredictiveSummary::n_draws);

  py::class_<BudgetGrowth>(m, "BudgetGrowth")
      .def_readonly("delta_compute", &BudgetGrowth::delta_compute)
      .def_readonly("delta_data", &BudgetGrowth::delta_data)
      .def_readonly("ratio", &BudgetGrowth::ratio);

  py::class_<LooScore>(m, "LooScore")
      .def_readonly("mean_log_score", &LooScore::mean_log_score)
      .def_readonly("n_folds", &LooScore::n_folds)
      .def_readonly("folds_failed", &LooScore::folds_failed);

  py::class_<VarianceSelection>(m, "VarianceSelection")
      .def_readonly("chosen", &VarianceSelection::chosen)
      .def_readonly("grid", &VarianceSelection::grid)
      .def_readonly("scores", &VarianceSelection::scores);

  // data ingest
  py::class_<ColumnMap>(m, "ColumnMap")
      .def(py::init<>())
      .def_readwrite("name", &ColumnMap::name)
      .def_readwrite("year", &ColumnMap::year)
      .def_readwrite("compute", &ColumnMap::compute)
      .def_readwrite("data", &ColumnMap::data)
      .def_readwrite("accuracy", &ColumnMap::accuracy);

  m.def("parse_records", &parse_records, py::arg("csv_text"),
        py::arg("columns") = ColumnMap{});
  m.def("normalize", &normalize, py::arg("record"),
        py::arg("refs") = NormConstants{});
  m.def("denormalize", &denormalize, py::arg("record"),
        py::arg("refs") = NormConstants{}, py::arg("name") = "");
  m.def("build_dataset", &build_dataset, py::arg("records"),
        py::arg("refs") = NormConstants{});
  m.def("serialize_records", &serialize_records, py::arg("records"));
  m.def("load_dataset", &load_dataset, py::arg("path"),
        py::arg("columns") = ColumnMap{}, py::arg("refs") = NormConstants{});

  // compute estimation
  m.def(
      "estimate_by_op_counting",
      [](double forward_flop, double epochs, std::optional<double> examples,
         std::optional<double> n_batches, std::optional<double> batch_size) {
        OpCountInputs in;
        in.forward_flop = forward_flop;
        in.epochs = epochs;
        in.examples = examples;
        in.n_batches = n_batches;
        in.batch_size = batch_size;
        return estimate_by_op_counting(in);
      },
      py::arg("forward_flop"), py::arg("epochs"),
      py::arg("examples") = std::nullopt, py::arg("n_batches") = std::nullopt,
      py::arg("batch_size") = std::nullopt);
  m.def(
      "estimate_by_gpu_time",
      [](double seconds, double n_cores, double peak_flops,
         std::optional<double> utilization) {
        GpuTimeInputs in;
        in.seconds = seconds;
        in.n_cores = n_cores;
        in.peak_flops = peak_flops;
        in.utilization = utilization;
        return estimate_by_gpu_time(in);
      },
      py::arg("seconds"), py::arg("n_cores"), py::arg("peak_flops"),
      py::arg("utilization") = std::nullopt);
  m.def("gpu_days", &gpu_days, py::arg("days_elapsed"), py::arg("n_gpus"));

  // scaling model
  m.def("effective_compute", &effective_compute, py::arg("params"),
        py::arg("record"));
  m.def("effective_data", &effective_data, py::arg("params"),
        py::arg("record"));
  m.def("predict_accuracy", &predict_accuracy, py::arg("params"),
        py::arg("record"));
  m.def("predicted_logit", &predicted_logit, py::arg("params"),
        py::arg("record"));
  m.def("log_likelihood", &log_likelihood, py::arg("params"),
        py::arg("dataset"));
  m.def("log_prior", &log_prior, py::arg("params"), py::arg("prior"));
  m.def("neg_log_posterior", &neg_log_posterior, py::arg("params"),
        py::arg("dataset"), py::arg("prior"));
  m.def(
      "neg_log_posterior_grad",
      [](const Params& p, const Dataset& ds, const PriorSpec& spec) {
        ParamArray g = neg_log_posterior_grad(p, ds, spec);
        return std::vector<double>(g.begin(), g.end());
      },
      py::arg("params"), py::arg("dataset"), py::arg("prior"));
  m.def("invert_for_compute", &invert_for_compute, py::arg("params"),
        py::arg("dyear"), py::arg("log_d"), py::arg("target_p"));
  m.def("chinchilla_approx", &chinchilla_approx, py::arg("params"),
        py::arg("record"));

  // estimation
  m.def("fit_map", &fit_map, py::arg("dataset"), py::arg("prior"),
        py::arg("config"), py::arg("n_threads") = 0,
        py::call_guard<py::gil_scoped_release>());
  m.def("loo_log_score", &loo_log_score, py::arg("dataset"), py::arg("prior"),
        py::arg("config"), py::arg("n_threads") = 0,
        py::call_guard<py::gil_scoped_release>());
  m.def("select_prior_variance", &select_prior_variance, py::arg("dataset"),
        py::arg("variance_grid"), py::arg("config"), py::arg("n_threads") = 0,
        py::call_guard<py::gil_scoped_release>());

  // uncertainty
  m.def("bootstrap", &bootstrap, py::arg("dataset"), py::arg("prior"),
        py::arg("config"), py::arg("n"), py::arg("seed"),
        py::arg("n_threads") = 0, py::call_guard<py::gil_scoped_release>());
  m.def("percentile_ci", &percentile_ci, py::arg("ensemble"), py::arg("g"),
        py::arg("level"));
  m.def("ensemble_mean", &ensemble_mean, py::arg("ensemble"), py::arg("g"));
  m.def("ensemble_std", &ensemble_std, py::arg("ensemble"), py::arg("g"));

  // attribution
  m.def("shapley", &shapley, py::arg("params"), py::arg("transition"),
        py::arg("players"), py::arg("metric"));
  m.def("shapley_four_way", &shapley_four_way, py::arg("params"),
        py::arg("transition"), py::arg("metric"));
  m.def("attribution_table", &attribution_table, py::arg("params"),
        py::arg("pairs"), py::arg("players"), py::arg("metric"));

  // analysis
  m.def("doubling_time", &doubling_time, py::arg("params"));
  m.def("budget_expansion_rate", &budget_expansion_rate, py::arg("params"),
        py::arg("branch"));
  m.def("threshold_halving_time", &threshold_halving_time, py::arg("params"),
        py::arg("target_p"), py::arg("log_d_fixed"), py::arg("year_a"),
        py::arg("year_b"), py::arg("freeze_beta_year") = false);
  m.def("threshold_halving_time_instant", &threshold_halving_time_instant,
        py::arg("params"), py::arg("target_p"), py::arg("log_d_fixed"),
        py::arg("year"), py::arg("freeze_beta_year") = false);
  m.def("pareto_frontier", &pareto_frontier, py::arg("params"),
        py::arg("target_p"), py::arg("year"), py::arg("log_d_grid"));
  m.def("predictive_distribution", &predictive_distribution,
        py::arg("ensemble"), py::arg("record"), py::arg("n_draws"),
        py::arg("seed"));
  m.def("effective_budget_growth", &effective_budget_growth, py::arg("params"),
        py::arg("dataset"));
  m.def("within_dataset_hull", &within_dataset_hull, py::arg("dataset"),
        py::arg("record"), py::arg("tolerance") = 1e-7);

  m.def("sha256_hex",
        [](const std::string& s) { return progress::sha256_hex(s); });
}
