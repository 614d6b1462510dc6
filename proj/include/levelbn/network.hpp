#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "levelbn/dataset.hpp"
#include "levelbn/score.hpp"
#include "levelbn/subset_index.hpp"

namespace levelbn {

/// Result of structure learning: a topological order, one parent set per
/// variable (a subset of its order predecessors) and the total log score.
struct LearnedNetwork {
  /// order[0] is the most upstream variable.
  std::vector<int> order;
  /// parents[v] for variable id v.
  std::vector<VarSet> parents;
  LogScore total_log_score = 0.0;

  int p() const noexcept { return static_cast<int>(order.size()); }
  /// Same order and parent sets (scores are not compared).
  bool same_structure(const LearnedNetwork& other) const noexcept {
    return order == other.order && parents == other.parents;
  }
  int edge_count() const noexcept;
};

/// Sum over variables of log Q(X, parents) - log Q(parents), recomputed from
/// data in order position sequence.
LogScore score_network(const Dataset& d, const LearnedNetwork& net);

/// True if parents[v] only holds variables placed before v in order and order
/// is a permutation of 0..p-1.
bool is_consistent(const LearnedNetwork& net);

struct LevelSize {
  int k = 0;
  std::uint64_t combinations = 0;
  /// Tracked DP entries live right after level k was filled.
  std::uint64_t live_entries = 0;
  /// Entries of level k's own buffer (0 when the algorithm keeps no
  /// per-level buffers).
  std::uint64_t level_entries = 0;
};

struct RunStats {
  double wall_time_seconds = 0.0;
  /// Marginal likelihoods computed while sweeping the lattice.
  std::uint64_t subset_evaluations_main = 0;
  /// Including any evaluations made after the sweep (parent reconstruction).
  std::uint64_t subset_evaluations_total = 0;
  /// Complete passes over the subset lattice during the DP phase.
  int full_sweeps = 0;
  std::uint64_t peak_tracked_entries = 0;
  std::uint64_t peak_tracked_bytes = 0;
  std::vector<LevelSize> per_level_sizes;
};

/// How the level-wise DP recovers full parent sets after discarding levels.
enum class ParentRecovery {
  /// The sink table also stores each subset's sink parent set; backtracking
  /// reads parents directly.
  kSinkParents,
  /// The sink table stores only sink ids; parents are recomputed afterwards by
  /// enumerating subsets of each variable's predecessors.
  kRecompute,
};

std::string_view to_string(ParentRecovery mode);
std::optional<ParentRecovery> parse_parent_recovery(std::string_view text);

/// Deliberate comparator corruption for checking that the oracle harness
/// notices wrong answers. Never enabled outside tests.
enum class Mutation {
  kNone,
  /// Sink selection keeps the worst candidate instead of the best.
  kInvertSinkChoice,
};

inline constexpr int kLevelwiseDefaultMaxP = 28;
inline constexpr int kBaselineDefaultMaxP = 24;
inline constexpr const char* kMemoryBudgetEnv = "LEVELBN_MEMORY_BUDGET";

struct RunOptions {
  int workers = 1;
  /// Predicted peak bytes above this are refused before allocating; 0 selects
  /// default_memory_budget().
  std::uint64_t memory_budget_bytes = 0;
  /// 0 selects the algorithm's default cap.
  int max_p = 0;
  ParentRecovery parent_recovery = ParentRecovery::kSinkParents;
  Mutation mutation = Mutation::kNone;
};

/// Budget from LEVELBN_MEMORY_BUDGET, else 16 GiB.
std::uint64_t default_memory_budget();
/// "1048576", "512M", "16G", "2GiB", ... (binary multiples). nullopt if malformed.
std::optional<std::uint64_t> parse_byte_size(std::string_view text);

RunOptions default_run_options();

/// Parent-set preference shared by every search in the library: a higher
/// score wins; on an exact tie the smaller set wins, then the set with the
/// smaller colex rank (for equal sizes, the smaller mask).
constexpr bool better_parent_set(LogScore score, VarSet set, LogScore best_score, VarSet best_set) noexcept {
  if (score != best_score) return score > best_score;
  if (set.size() != best_set.size()) return set.size() < best_set.size();
  return set.mask() < best_set.mask();
}

inline constexpr LogScore kNegInf = -std::numeric_limits<double>::infinity();

}  // namespace levelbn
