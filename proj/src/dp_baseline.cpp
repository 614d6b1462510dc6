#include "levelbn/dp_baseline.hpp"

#include <chrono>

#include "levelbn/errors.hpp"
#include "levelbn/parallel.hpp"

namespace levelbn {

FullTables compute_full_tables(const Scorer& scorer, int workers, EntryTracker& tracker, ScoreCounter& counter,
                               std::vector<LevelSize>* per_level) {
  const int p = scorer.p();
  const std::size_t subsets = std::size_t{1} << p;
  const std::size_t per_variable = subsets / 2;

  FullTables t;
  t.p = p;
  t.q_all = TrackedArray<double>(tracker, subsets, 0.0);
  for (int x = 0; x < p; ++x) {
    t.bps_score_all.emplace_back(tracker, per_variable, kNegInf);
    t.bps_set_all.emplace_back(tracker, per_variable, VarSet{});
  }
  t.r_all = TrackedArray<double>(tracker, subsets, 0.0);
  t.sink_all = TrackedArray<std::uint8_t>(tracker, subsets, std::uint8_t{0xFF});

  // Pass 1: local scores.
  parallel_blocks(subsets - 1, workers, [&](std::uint64_t begin, std::uint64_t end, int) {
    ScoreWorkspace ws;
    for (std::uint64_t m = begin + 1; m <= end; ++m) {
      t.q_all[m] = scorer.q_subset(VarSet(static_cast<std::uint32_t>(m)), ws);
    }
    ws.flush(counter);
  });
  ++t.full_sweeps;

  // Pass 2: best parent sets. Each variable's table is independent; within a
  // table every T \ {Y} precedes T in numeric order.
  parallel_blocks(static_cast<std::uint64_t>(p), workers, [&](std::uint64_t begin, std::uint64_t end, int) {
    for (auto xi = begin; xi < end; ++xi) {
      const int x = static_cast<int>(xi);
      auto& score = t.bps_score_all[xi];
      auto& sets = t.bps_set_all[xi];
      for (std::uint32_t cm = 0; cm < per_variable; ++cm) {
        const VarSet parents(expand_at(cm, x));
        double best = kNegInf;
        VarSet best_set;
        for (std::uint32_t m = cm; m != 0; m &= m - 1) {
          const std::uint32_t sub = cm & ~(m & (~m + 1U));
          if (better_parent_set(score[sub], sets[sub], best, best_set)) {
            best = score[sub];
            best_set = sets[sub];
          }
        }
        const double full = q_conditional(t.q_all[parents.with(x).mask()], t.q_all[parents.mask()]);
        if (better_parent_set(full, parents, best, best_set)) {
          best = full;
          best_set = parents;
        }
        score[cm] = best;
        sets[cm] = best_set;
      }
    }
  });
  ++t.full_sweeps;

  // Pass 3: R and sinks, level by level.
  t.r_all[0] = 0.0;
  for (int k = 1; k <= p; ++k) {
    parallel_blocks(binom(p, k), workers, [&](std::uint64_t begin, std::uint64_t end, int) {
      for (VarSet s : LevelRange(p, k, begin, end)) {
        int sink = -1;
        double best = kNegInf;
        s.for_each([&](int x) {
          const VarSet rest = s.without(x);
          const double cand = t.r_all[rest.mask()] + t.bps_score(x, rest);
          if (sink < 0 || cand > best) {
            best = cand;
            sink = x;
          }
        });
        t.r_all[s.mask()] = best;
        t.sink_all[s.mask()] = static_cast<std::uint8_t>(sink);
      }
    });
    if (per_level) per_level->push_back(LevelSize{k, binom(p, k), tracker.live_entries(), 0});
  }
  ++t.full_sweeps;
  return t;
}

BaselineResult run_baseline(const Dataset& d, const RunOptions& options) {
  const int p = d.p();
  const int cap = options.max_p > 0 ? options.max_p : kBaselineDefaultMaxP;
  if (p < 1 || p > cap || p > kMaxVariables) {
    throw ParameterError("baseline: p=" + std::to_string(p) + " outside [1," + std::to_string(cap) + "]");
  }
  const AccountingReport predicted = baseline_peak_entries(p);
  const std::uint64_t budget = options.memory_budget_bytes ? options.memory_budget_bytes : default_memory_budget();
  if (predicted.peak_bytes > budget) throw BudgetError(predicted.peak_bytes, budget);

  const auto start = std::chrono::steady_clock::now();
  BaselineResult result;
  EntryTracker tracker;
  ScoreCounter counter;
  const Scorer scorer(d);
  {
    FullTables t = compute_full_tables(scorer, options.workers, tracker, counter, &result.stats.per_level_sizes);
    LearnedNetwork& net = result.network;
    net.order.assign(static_cast<std::size_t>(p), 0);
    net.parents.assign(static_cast<std::size_t>(p), VarSet{});
    VarSet s = VarSet::full(p);
    for (int i = p - 1; i >= 0; --i) {
      const std::uint8_t x = t.sink_all[s.mask()];
      if (x == 0xFF || !s.contains(x)) throw InternalStateError("baseline: no sink recorded for " + s.to_string());
      s = s.without(x);
      net.order[static_cast<std::size_t>(i)] = x;
      net.parents[x] = t.bps_set(x, s);
    }
    net.total_log_score = t.r_all[VarSet::full(p).mask()];
    result.stats.full_sweeps = t.full_sweeps;
  }
  result.stats.subset_evaluations_main = counter.subset_evaluations();
  result.stats.subset_evaluations_total = counter.subset_evaluations();
  result.stats.peak_tracked_entries = tracker.peak_entries();
  result.stats.peak_tracked_bytes = tracker.peak_bytes();
  result.stats.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace levelbn
