#pragma once

#include <atomic>
#include <cstdint>
#include <span>
#include <vector>

#include "levelbn/dataset.hpp"
#include "levelbn/subset_index.hpp"

namespace levelbn {

/// Natural log of a marginal likelihood Q(.). Always <= 0 for nonempty
/// subsets; log Q(empty) = 0.
using LogScore = double;

/// Number of marginal likelihoods computed from data. Workers accumulate
/// locally and add their totals at level barriers.
class ScoreCounter {
 public:
  void add(std::uint64_t n) noexcept { evaluations_.fetch_add(n, std::memory_order_relaxed); }
  std::uint64_t subset_evaluations() const noexcept { return evaluations_.load(std::memory_order_relaxed); }

 private:
  std::atomic<std::uint64_t> evaluations_{0};
};

/// lgamma(x + n) - lgamma(x) for x > 0, accurate for large x as well.
double log_rising(double x, std::uint64_t n);

/// Sequential Jeffreys marginal likelihood of a sequence of symbols:
///   sum_i log(c_{i-1}(x_i) + 1/2) - log(i - 1 + sigma/2)
/// with occurrence counts built up from zero. Symbols only need to compare
/// equal; an empty sequence scores 0. Throws ParameterError if sigma < 1.
LogScore q_sequential(std::span<const std::uint64_t> values, double sigma);

/// Telescoped form of q_sequential over the final counts:
///   lgG(sigma/2) - lgG(n + sigma/2) + sum_v [lgG(n_v + 1/2) - lgG(1/2)].
/// Throws ParameterError if the counts do not sum to n.
LogScore q_closed(const ContingencyCounts& counts, std::uint64_t n);

/// log Q(X | T) = log Q(X, T) - log Q(T).
constexpr LogScore q_conditional(LogScore log_q_joint, LogScore log_q_parents) noexcept {
  return log_q_joint - log_q_parents;
}

/// Per-worker scratch for Scorer::q_subset.
struct ScoreWorkspace {
  CountingWorkspace counting;
  std::uint64_t evaluations = 0;

  /// Moves the local evaluation count into counter.
  void flush(ScoreCounter& counter) noexcept {
    counter.add(evaluations);
    evaluations = 0;
  }
};

/// Scores subsets of one dataset. Thread-safe for concurrent q_subset calls as
/// long as every thread uses its own workspace.
class Scorer {
 public:
  explicit Scorer(const Dataset& d);

  const Dataset& data() const noexcept { return *data_; }
  int p() const noexcept { return data_->p(); }

  /// log Q(s) from data (count_configurations followed by the closed form).
  /// Counts one evaluation in ws. Returns 0 for the empty set without counting.
  LogScore q_subset(VarSet s, ScoreWorkspace& ws) const;

 private:
  const Dataset* data_;
  // half_[c] = lgG(c + 1/2) - lgG(1/2)
  std::vector<double> half_;
};

/// Convenience form of Scorer::q_subset; increments counter by one.
LogScore q_subset(const Dataset& d, VarSet s, ScoreCounter& counter);

}  // namespace levelbn
