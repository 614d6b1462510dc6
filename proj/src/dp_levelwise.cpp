#include "levelbn/dp_levelwise.hpp"

#include <array>
#include <chrono>
#include <optional>

#include "levelbn/errors.hpp"
#include "levelbn/parallel.hpp"

namespace levelbn {

LevelBuffer::LevelBuffer(int p, int k, EntryTracker& tracker)
    : p_(p),
      k_(k),
      size_(binom(p, k)),
      q_(tracker, size_, 0.0),
      r_(tracker, size_, 0.0),
      bps_score_(tracker, size_ * static_cast<Rank>(k), kNegInf),
      bps_set_(tracker, size_ * static_cast<Rank>(k), VarSet{}) {}

LevelBuffer LevelBuffer::empty_level(int p, EntryTracker& tracker) { return LevelBuffer(p, 0, tracker); }

SinkTable::SinkTable(int p, bool with_parents, EntryTracker& tracker)
    : p_(p), sinks_(tracker, std::size_t{1} << p, kUnset) {
  if (with_parents) parents_ = TrackedArray<VarSet>(tracker, std::size_t{1} << p, VarSet{});
}

LevelBuffer compute_level(const LevelBuffer& prev, SinkTable& sinks, const LevelContext& ctx) {
  const int p = prev.p();
  const int k = prev.k() + 1;
  if (k > p) throw ParameterError("compute_level: level " + std::to_string(k) + " exceeds p");
  LevelBuffer cur(p, k, *ctx.tracker);
  const Scorer& scorer = *ctx.scorer;
  const bool invert_sink = ctx.mutation == Mutation::kInvertSinkChoice;

  parallel_blocks(cur.size(), ctx.workers, [&](std::uint64_t begin, std::uint64_t end, int) {
    ScoreWorkspace ws;
    std::array<Rank, kMaxVariables> below{};  // colex rank of S \ {member t} in prev
    Rank idx = begin;
    for (VarSet s : LevelRange(p, k, begin, end)) {
      const Members mem = s.members();
      sub_ranks(s, below);
      const double q = scorer.q_subset(s, ws);
      cur.q(idx) = q;

      double* score_row = cur.bps_score_row(idx);
      VarSet* set_row = cur.bps_set_row(idx);
      // Full candidates first: S \ {X} for each member X.
      for (int i = 0; i < k; ++i) {
        score_row[i] = q_conditional(q, prev.q(below[static_cast<std::size_t>(i)]));
        set_row[i] = s.without(mem[i]);
      }
      // Inherited: X's best set within S \ {X, Y}, read row by row from each
      // S \ {Y}. The preference is a total order, so visiting order is free.
      for (int m = 0; m < k; ++m) {
        const Rank row = below[static_cast<std::size_t>(m)];
        const double* prev_score = prev.bps_score_row(row);
        const VarSet* prev_set = prev.bps_set_row(row);
        // Entries before position m belong to the same member index; later
        // ones are shifted down by the removal of member m.
        auto take = [&](int i, int pos) {
          if (better_parent_set(prev_score[pos], prev_set[pos], score_row[i], set_row[i])) {
            score_row[i] = prev_score[pos];
            set_row[i] = prev_set[pos];
          }
        };
        for (int pos = 0; pos < m; ++pos) take(pos, pos);
        for (int pos = m; pos < k - 1; ++pos) take(pos + 1, pos);
      }

      int sink = 0;
      double best_r = prev.r(below[0]) + score_row[0];
      for (int i = 1; i < k; ++i) {
        const double cand = prev.r(below[static_cast<std::size_t>(i)]) + score_row[i];
        if (invert_sink ? cand < best_r : cand > best_r) {
          best_r = cand;
          sink = i;
        }
      }
      cur.r(idx) = best_r;
      sinks.set(s, mem[sink], set_row[sink]);
      ++idx;
    }
    ws.flush(*ctx.counter);
  });
  return cur;
}

std::vector<int> backtrack_order(const SinkTable& sinks) {
  const int p = sinks.p();
  std::vector<int> order(static_cast<std::size_t>(p));
  VarSet s = VarSet::full(p);
  for (int i = p - 1; i >= 0; --i) {
    const int x = sinks.sink(s);
    if (x < 0 || !s.contains(x)) {
      throw InternalStateError("backtrack_order: no sink recorded for " + s.to_string());
    }
    order[static_cast<std::size_t>(i)] = x;
    s = s.without(x);
  }
  return order;
}

ReconstructedParents reconstruct_parents(const Scorer& scorer, std::span<const int> order, EntryTracker* tracker) {
  const int p = static_cast<int>(order.size());
  if (p != scorer.p()) throw ParameterError("reconstruct_parents: order length differs from p");
  VarSet seen;
  for (int v : order) {
    if (v < 0 || v >= p || seen.contains(v)) throw ParameterError("reconstruct_parents: order is not a permutation");
    seen = seen.with(v);
  }

  ReconstructedParents out;
  out.parents.assign(static_cast<std::size_t>(p), VarSet{});
  // known[m] = log Q of the predecessors selected by positional mask m.
  EntryTracker local;
  TrackedArray<double> known(tracker ? *tracker : local, std::size_t{1} << (p - 1), 0.0);
  ScoreWorkspace ws;
  for (int i = 0; i < p; ++i) {
    const int x = order[static_cast<std::size_t>(i)];
    const std::uint64_t n_subsets = std::uint64_t{1} << i;
    double best = kNegInf;
    VarSet best_set;
    for (std::uint64_t pm = 0; pm < n_subsets; ++pm) {
      VarSet t;
      for (std::uint64_t m = pm; m != 0; m &= m - 1) t = t.with(order[static_cast<std::size_t>(std::countr_zero(m))]);
      const double joint = scorer.q_subset(t.with(x), ws);
      const double cand = q_conditional(joint, known[pm]);
      if (better_parent_set(cand, t, best, best_set)) {
        best = cand;
        best_set = t;
      }
      if (i + 1 < p) known[pm | n_subsets] = joint;
    }
    out.parents[static_cast<std::size_t>(x)] = best_set;
    out.total_log_score += best;
  }
  out.evaluations = ws.evaluations;
  return out;
}

ReconstructedParents reconstruct_parents(const Dataset& d, std::span<const int> order) {
  Scorer scorer(d);
  return reconstruct_parents(scorer, order, nullptr);
}

LevelwiseResult run_levelwise(const Dataset& d, const RunOptions& options, const LevelObserver& observer) {
  const int p = d.p();
  const int cap = options.max_p > 0 ? options.max_p : kLevelwiseDefaultMaxP;
  if (p < 1 || p > cap || p > kMaxVariables) {
    throw ParameterError("levelwise: p=" + std::to_string(p) + " outside [1," + std::to_string(cap) + "]");
  }
  const AccountingReport predicted = estimate_peak_entries(p, options.parent_recovery);
  const std::uint64_t budget = options.memory_budget_bytes ? options.memory_budget_bytes : default_memory_budget();
  if (predicted.peak_bytes > budget) throw BudgetError(predicted.peak_bytes, budget);

  const auto start = std::chrono::steady_clock::now();
  LevelwiseResult result;
  RunStats& stats = result.stats;
  EntryTracker tracker;
  ScoreCounter counter;
  const Scorer scorer(d);
  LevelContext ctx{&scorer, &counter, &tracker, options.workers, options.mutation};

  std::optional<SinkTable> sinks(std::in_place, p, options.parent_recovery == ParentRecovery::kSinkParents, tracker);
  std::optional<LevelBuffer> level(LevelBuffer::empty_level(p, tracker));
  for (int k = 1; k <= p; ++k) {
    const std::uint64_t before = tracker.live_entries();
    LevelBuffer next = compute_level(*level, *sinks, ctx);
    stats.per_level_sizes.push_back(LevelSize{k, next.size(), tracker.live_entries(), tracker.live_entries() - before});
    if (observer) observer(next, *sinks);
    *level = std::move(next);
  }
  stats.full_sweeps = 1;
  stats.subset_evaluations_main = counter.subset_evaluations();
  result.network.total_log_score = level->r(0);
  level.reset();

  result.network.order = backtrack_order(*sinks);
  if (sinks->has_parents()) {
    result.network.parents.assign(static_cast<std::size_t>(p), VarSet{});
    VarSet prefix = VarSet::full(p);
    for (int i = p - 1; i >= 0; --i) {
      const int x = result.network.order[static_cast<std::size_t>(i)];
      result.network.parents[static_cast<std::size_t>(x)] = sinks->sink_parents(prefix);
      prefix = prefix.without(x);
    }
  } else {
    ReconstructedParents rec = reconstruct_parents(scorer, result.network.order, &tracker);
    result.network.parents = std::move(rec.parents);
    counter.add(rec.evaluations);
  }
  sinks.reset();

  stats.subset_evaluations_total = counter.subset_evaluations();
  stats.peak_tracked_entries = tracker.peak_entries();
  stats.peak_tracked_bytes = tracker.peak_bytes();
  stats.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace levelbn
