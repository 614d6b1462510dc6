#pragma once

#include <cstdint>
#include <vector>

#include "levelbn/dataset.hpp"
#include "levelbn/memory.hpp"
#include "levelbn/network.hpp"
#include "levelbn/score.hpp"

namespace levelbn {

/// Removes bit x from mask and shifts the higher bits down by one.
constexpr std::uint32_t squeeze_out(std::uint32_t mask, int x) noexcept {
  const std::uint32_t low = mask & ((std::uint32_t{1} << x) - 1U);
  return low | ((mask >> (x + 1)) << x);
}

/// Inverse of squeeze_out: reopens a zero bit at position x.
constexpr std::uint32_t expand_at(std::uint32_t compressed, int x) noexcept {
  const std::uint32_t low = compressed & ((std::uint32_t{1} << x) - 1U);
  return low | ((compressed >> x) << (x + 1));
}

/// Every table of the multi-pass DP, resident for the whole run.
struct FullTables {
  int p = 0;
  /// log Q(S) by bitmask.
  TrackedArray<double> q_all;
  /// Per variable X: indexed by squeeze_out(T, X) for T within V \ {X}.
  std::vector<TrackedArray<double>> bps_score_all;
  std::vector<TrackedArray<VarSet>> bps_set_all;
  /// log R(S) by bitmask, R(empty) = 0.
  TrackedArray<double> r_all;
  TrackedArray<std::uint8_t> sink_all;
  int full_sweeps = 0;

  double bps_score(int x, VarSet t) const noexcept {
    return bps_score_all[static_cast<std::size_t>(x)][squeeze_out(t.mask(), x)];
  }
  VarSet bps_set(int x, VarSet t) const noexcept {
    return bps_set_all[static_cast<std::size_t>(x)][squeeze_out(t.mask(), x)];
  }
};

/// The three passes: local scores of all subsets; best parent sets per
/// variable over growing candidate sets; R and sinks over growing subsets.
FullTables compute_full_tables(const Scorer& scorer, int workers, EntryTracker& tracker, ScoreCounter& counter,
                               std::vector<LevelSize>* per_level = nullptr);

struct BaselineResult {
  LearnedNetwork network;
  RunStats stats;
};

/// Multi-pass full-table DP. Parents are looked up directly in the resident
/// best-parent tables. Throws ParameterError for p outside [1, max_p] and
/// BudgetError when baseline_peak_entries exceeds the budget.
BaselineResult run_baseline(const Dataset& d, const RunOptions& options = default_run_options());

}  // namespace levelbn
