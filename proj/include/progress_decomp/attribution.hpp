#pragma once

#include <string>
#include <vector>

#include "progress_decomp/types.hpp"

namespace progress {

/// Endpoints of a model-pair comparison (e.g. AlexNet -> ResNet50).
struct Transition {
  NormalizedRecord old_record;
  NormalizedRecord new_record;
};

/// THREE treats the year change as one player; FOUR splits it into its
/// compute-branch and data-branch effects.
enum class PlayerSet { three, four };

enum class Metric { linear, log_odds };

/// Tolerance below which a non-scaled player's value counts as "no scaling"
/// for table rendering.
constexpr double kNoScalingTolerance = 1e-12;

struct AttributionResult {
  PlayerSet players = PlayerSet::three;
  Metric metric = Metric::linear;
  std::vector<std::string> player_names;
  std::vector<double> values;   // per-player Shapley value, metric units
  double total = 0.0;           // v(all players)
  std::vector<double> shares;   // value / total (sign preserved)
  bool shares_defined = false;  // false when total == 0
  std::vector<bool> no_scaling;  // player's inputs unchanged and value ~ 0
  double error_reduction = 0.0;  // observed accuracy gain, percentage points
};

/// Exact Shapley attribution of the predicted-performance change across a
/// transition, by enumeration of all player permutations. The characteristic
/// function substitutes new inputs for coalition members in the noiseless
/// accuracy model; the metric is identity (linear) or logit (log_odds).
AttributionResult shapley(const Params& p, const Transition& t,
                          PlayerSet players, Metric metric);

/// Four-player variant: the year change acts separately inside the compute
/// and data branches.
AttributionResult shapley_four_way(const Params& p, const Transition& t,
                                   Metric metric);

/// Maps shapley over model pairs.
std::vector<AttributionResult> attribution_table(
    const Params& p, const std::vector<Transition>& pairs, PlayerSet players,
    Metric metric);

}  // namespace progress
