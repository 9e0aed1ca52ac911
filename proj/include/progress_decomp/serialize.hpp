#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "progress_decomp/analysis.hpp"
#include "progress_decomp/attribution.hpp"
#include "progress_decomp/estimation.hpp"
#include "progress_decomp/uncertainty.hpp"

namespace progress {

/// All documents use ordered keys so serialization is byte-stable.
using Json = nlohmann::ordered_json;

/// Shortest decimal representation that round-trips to the same double.
std::string format_double(double v);

Json params_to_json(const Params& p);
Params params_from_json(const Json& j);

Json prior_to_json(const PriorSpec& spec);
PriorSpec prior_from_json(const Json& j);

Json fit_config_to_json(const FitConfig& cfg);
FitConfig fit_config_from_json(const Json& j);

Json fit_result_to_json(const FitResult& fit);
FitResult fit_result_from_json(const Json& j);

Json ensemble_to_json(const BootstrapEnsemble& ens);
BootstrapEnsemble ensemble_from_json(const Json& j);

/// One row per replicate: index, the seven parameters, objective.
std::string ensemble_to_csv(const BootstrapEnsemble& ens);

Json attribution_to_json(const AttributionResult& res);

/// Table rows with pair labels; shares as percentages, the no-scaling marker
/// rendered as "NS".
Json attribution_table_to_json(const std::vector<std::string>& old_names,
                               const std::vector<std::string>& new_names,
                               const std::vector<AttributionResult>& rows);
std::string attribution_table_to_csv(
    const std::vector<std::string>& old_names,
    const std::vector<std::string>& new_names,
    const std::vector<AttributionResult>& rows);

std::string frontier_to_csv(const ParetoFrontier& frontier,
                            const NormConstants& refs);
Json frontier_to_json(const ParetoFrontier& frontier);

Json predictive_to_json(const PredictiveSummary& summary);
std::string predictive_to_csv(const PredictiveSummary& summary);

FitResult load_fit_result(const std::string& path);
BootstrapEnsemble load_ensemble(const std::string& path);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace progress
