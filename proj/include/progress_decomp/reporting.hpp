#pragma once

#include <map>
#include <string>
#include <vector>

#include "progress_decomp/serialize.hpp"

namespace progress {

/// Provenance block embedded in every output document. Wall-clock duration
/// is intentionally not part of it: documents must be byte-identical across
/// reruns, so timing goes to the console summary instead.
struct RunManifest {
  std::string subcommand;
  std::map<std::string, std::string> flags;  // sorted; full effective flag set
  std::uint64_t master_seed = 0;
  std::string dataset_path;
  std::string dataset_hash;

  Json to_json() const;
};

/// The six models whose pairwise transitions make up the attribution tables.
const std::vector<std::pair<std::string, std::string>>& default_report_pairs();

struct ReportOptions {
  double ci_level = 0.95;
  std::vector<double> thresholds = {0.60, 0.70, 0.80, 0.84, 0.88};
  double year_a = 2012.0;
  double year_b = 2022.0;
  double log_d_fixed = 0.0;
  std::vector<std::pair<std::string, std::string>> pairs;  // empty = default
};

struct ReportBundle {
  Json document;  // the full JSON report
  std::map<std::string, std::string> csv_tables;  // filename -> content
};

/// Machine-readable reproduction of the headline tables: parameter estimates
/// with ensemble spread, the attribution tables in both metrics and both
/// player sets, the threshold grid, and headline scalars. Throws
/// HashMismatch when the fit or ensemble was built from different data.
ReportBundle report_tables(const FitResult& fit, const BootstrapEnsemble& ens,
                           const Dataset& ds, const ReportOptions& options);

}  // namespace progress
