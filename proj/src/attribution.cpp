#include "progress_decomp/attribution.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "progress_decomp/math_util.hpp"
#include "progress_decomp/scaling_model.hpp"

namespace progress {
namespace {

// Player order is fixed: THREE = {year, compute, data},
// FOUR = {year_compute_branch, year_data_branch, compute, data}.
const std::vector<std::string> kThreeNames = {"year", "compute", "data"};
const std::vector<std::string> kFourNames = {"year_compute_branch",
                                             "year_data_branch", "compute",
                                             "data"};

/// Model value for the coalition given by `mask` (bit i set = player i uses
/// the new endpoint's input).
double coalition_value(const Params& p, const Transition& t, PlayerSet players,
                       unsigned mask) {
  const NormalizedRecord& o = t.old_record;
  const NormalizedRecord& n = t.new_record;
  NormalizedRecord x;
  double dyear_data;
  if (players == PlayerSet::three) {
    x.dyear = (mask & 1u) ? n.dyear : o.dyear;
    dyear_data = x.dyear;
    x.log_c = (mask & 2u) ? n.log_c : o.log_c;
    x.log_d = (mask & 4u) ? n.log_d : o.log_d;
  } else {
    x.dyear = (mask & 1u) ? n.dyear : o.dyear;  // compute-branch year
    dyear_data = (mask & 2u) ? n.dyear : o.dyear;
    x.log_c = (mask & 4u) ? n.log_c : o.log_c;
    x.log_d = (mask & 8u) ? n.log_d : o.log_d;
  }
  double c = p.alpha1 + p.alpha_year * x.dyear + p.alpha_compute * x.log_c;
  double d = p.beta1 + p.beta_year * dyear_data + p.beta_data * x.log_d;
  return sigmoid(c) * sigmoid(d);
}

bool input_unchanged(const Transition& t, PlayerSet players, unsigned player) {
  const NormalizedRecord& o = t.old_record;
  const NormalizedRecord& n = t.new_record;
  if (players == PlayerSet::three) {
    switch (player) {
      case 0: return o.dyear == n.dyear;
      case 1: return o.log_c == n.log_c;
      default: return o.log_d == n.log_d;
    }
  }
  switch (player) {
    case 0:
    case 1: return o.dyear == n.dyear;
    case 2: return o.log_c == n.log_c;
    default: return o.log_d == n.log_d;
  }
}

}  // namespace

AttributionResult shapley(const Params& p, const Transition& t,
                          PlayerSet players, Metric metric) {
  const unsigned n = (players == PlayerSet::three) ? 3u : 4u;
  const unsigned n_masks = 1u << n;

  // Metric values of every coalition, indexed by mask.
  std::array<double, 16> v{};
  for (unsigned mask = 0; mask < n_masks; ++mask) {
    double f = coalition_value(p, t, players, mask);
    v[mask] = (metric == Metric::linear) ? f : logit(f);
  }

  // Average marginal contribution over all n! orders.
  std::array<unsigned, 4> perm = {0, 1, 2, 3};
  std::array<double, 4> sums{};
  unsigned n_perms = 0;
  do {
    unsigned mask = 0;
    double prev = v[0];
    for (unsigned k = 0; k < n; ++k) {
      mask |= 1u << perm[k];
      sums[perm[k]] += v[mask] - prev;
      prev = v[mask];
    }
    ++n_perms;
  } while (std::next_permutation(perm.begin(), perm.begin() + n));

  AttributionResult res;
  res.players = players;
  res.metric = metric;
  res.player_names = (players == PlayerSet::three) ? kThreeNames : kFourNames;
  res.total = v[n_masks - 1] - v[0];
  res.values.resize(n);
  res.shares.assign(n, 0.0);
  res.no_scaling.resize(n);
  res.shares_defined = res.total != 0.0;
  for (unsigned i = 0; i < n; ++i) {
    res.values[i] = sums[i] / n_perms;
    if (res.shares_defined) res.shares[i] = res.values[i] / res.total;
    res.no_scaling[i] = input_unchanged(t, players, i) &&
                        std::fabs(res.values[i]) < kNoScalingTolerance;
  }
  res.error_reduction =
      100.0 * (sigmoid(t.new_record.logit_p) - sigmoid(t.old_record.logit_p));
  return res;
}

AttributionResult shapley_four_way(const Params& p, const Transition& t,
                                   Metric metric) {
  return shapley(p, t, PlayerSet::four, metric);
}

std::vector<AttributionResult> attribution_table(
    const Params& p, const std::vector<Transition>& pairs, PlayerSet players,
    Metric metric) {
  std::vector<AttributionResult> rows;
  rows.reserve(pairs.size());
  for (const auto& t : pairs) rows.push_back(shapley(p, t, players, metric));
  return rows;
}

}  // namespace progress
