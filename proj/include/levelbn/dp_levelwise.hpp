#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "levelbn/dataset.hpp"
#include "levelbn/memory.hpp"
#include "levelbn/network.hpp"
#include "levelbn/score.hpp"
#include "levelbn/subset_index.hpp"

namespace levelbn {

/// All DP state for the k-subsets of one level, indexed by colex rank.
/// Row j of the best-parent arrays belongs to the j-th smallest member.
class LevelBuffer {
 public:
  LevelBuffer(int p, int k, EntryTracker& tracker);

  /// Level 0: the empty set with log Q = log R = 0.
  static LevelBuffer empty_level(int p, EntryTracker& tracker);

  int p() const noexcept { return p_; }
  int k() const noexcept { return k_; }
  Rank size() const noexcept { return size_; }

  /// log Q(S)
  double& q(Rank s) noexcept { return q_[s]; }
  double q(Rank s) const noexcept { return q_[s]; }
  /// log R(S): score of the best network over S.
  double& r(Rank s) noexcept { return r_[s]; }
  double r(Rank s) const noexcept { return r_[s]; }

  /// max over T within S \ {member j} of log Q(X_j | T), and its argmax T.
  double* bps_score_row(Rank s) noexcept { return bps_score_.data() + s * static_cast<Rank>(k_); }
  const double* bps_score_row(Rank s) const noexcept { return bps_score_.data() + s * static_cast<Rank>(k_); }
  VarSet* bps_set_row(Rank s) noexcept { return bps_set_.data() + s * static_cast<Rank>(k_); }
  const VarSet* bps_set_row(Rank s) const noexcept { return bps_set_.data() + s * static_cast<Rank>(k_); }

 private:
  int p_;
  int k_;
  Rank size_;
  TrackedArray<double> q_;
  TrackedArray<double> r_;
  TrackedArray<double> bps_score_;
  TrackedArray<VarSet> bps_set_;
};

/// Sink variable of every subset of V, indexed by bitmask; optionally the
/// sink's best parent set within the rest of the subset.
class SinkTable {
 public:
  static constexpr std::uint8_t kUnset = 0xFF;

  SinkTable(int p, bool with_parents, EntryTracker& tracker);

  int p() const noexcept { return p_; }
  bool has_parents() const noexcept { return parents_.size() != 0; }

  /// Sink of s, or -1 while s's level has not been computed.
  int sink(VarSet s) const noexcept {
    const std::uint8_t v = sinks_[s.mask()];
    return v == kUnset ? -1 : v;
  }
  VarSet sink_parents(VarSet s) const noexcept { return parents_[s.mask()]; }

  /// Disjoint subsets may be written concurrently.
  void set(VarSet s, int sink, VarSet parents) noexcept {
    sinks_[s.mask()] = static_cast<std::uint8_t>(sink);
    if (parents_.size() != 0) parents_[s.mask()] = parents;
  }

 private:
  int p_;
  TrackedArray<std::uint8_t> sinks_;
  TrackedArray<VarSet> parents_;
};

/// Shared context for one level pass.
struct LevelContext {
  const Scorer* scorer = nullptr;
  ScoreCounter* counter = nullptr;
  EntryTracker* tracker = nullptr;
  int workers = 1;
  Mutation mutation = Mutation::kNone;
};

/// Builds level k = prev.k() + 1 from level k-1 alone and writes the sink of
/// every subset at level k. For subset S and member X the best parent set is
/// the best of the full candidate S \ {X} (score Q(S)/Q(S\X)) and the stored
/// best sets of X in every S \ {Y}; R(S) maximizes R(S\X) + bps(X, S\X) over
/// X with the smallest id winning ties.
LevelBuffer compute_level(const LevelBuffer& prev, SinkTable& sinks, const LevelContext& ctx);

/// Reads the order off the sink table: the sink of V is last, then the sink
/// of V minus it, and so on. Throws InternalStateError on an unfilled entry.
std::vector<int> backtrack_order(const SinkTable& sinks);

struct ReconstructedParents {
  std::vector<VarSet> parents;
  /// Sum of the chosen conditional log scores.
  LogScore total_log_score = 0.0;
  std::uint64_t evaluations = 0;
};

/// For each position i, the subset T of the earlier variables maximizing
/// log Q(X_i, T) - log Q(T) (ties: smaller |T|, then smaller colex rank).
/// Evaluates every nonempty subset of V exactly once.
ReconstructedParents reconstruct_parents(const Dataset& d, std::span<const int> order);
ReconstructedParents reconstruct_parents(const Scorer& scorer, std::span<const int> order, EntryTracker* tracker);

struct LevelwiseResult {
  LearnedNetwork network;
  RunStats stats;
};

/// Called with every completed level before the level below it is freed.
using LevelObserver = std::function<void(const LevelBuffer& level, const SinkTable& sinks)>;

/// Learns the optimal network with one level-by-level sweep keeping only two
/// adjacent levels and the sink table. Throws ParameterError for p outside
/// [1, max_p] and BudgetError when estimate_peak_entries exceeds the budget.
LevelwiseResult run_levelwise(const Dataset& d, const RunOptions& options = default_run_options(),
                              const LevelObserver& observer = {});

}  // namespace levelbn
