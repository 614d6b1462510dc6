#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "levelbn/network.hpp"

namespace levelbn {

struct BenchConfig {
  int p_min = 10;
  int p_max = 14;
  int n = 200;
  std::uint64_t seed = 1;
  std::vector<std::string> algos{"levelwise", "baseline"};
  int repetitions = 1;
  int workers = 1;
  /// 0 selects default_memory_budget().
  std::uint64_t memory_budget_bytes = 0;
  int max_arity = 2;
  double edge_prob = 0.3;
  ParentRecovery parent_recovery = ParentRecovery::kSinkParents;
  /// Slice the first p columns of this CSV instead of generating data.
  std::optional<std::filesystem::path> data;
};

/// One (p, algo, repetition) measurement. status is "ok" or "refused".
struct BenchRow {
  int p = 0;
  std::string algo;
  int repetition = 0;
  std::uint64_t seed = 0;
  std::string status;
  double wall_time_seconds = 0.0;
  std::uint64_t peak_tracked_entries = 0;
  std::uint64_t peak_tracked_bytes = 0;
  std::uint64_t subset_evaluations_total = 0;
  int full_sweeps = 0;
  double total_log_score = 0.0;
  std::string message;
};

struct LevelProfileRow {
  int p = 0;
  std::string algo;
  int repetition = 0;
  int k = 0;
  std::uint64_t combinations = 0;
  std::uint64_t live_entries = 0;
  std::uint64_t level_entries = 0;
};

/// Per-p means over successful repetitions.
struct BenchSummaryRow {
  int p = 0;
  double levelwise_time = 0.0;
  double baseline_time = 0.0;
  double levelwise_peak_entries = 0.0;
  double baseline_peak_entries = 0.0;
  /// baseline / levelwise; 0 when either side has no successful run.
  double time_ratio = 0.0;
  double memory_ratio = 0.0;
  /// Both algorithms found the same total log score (within 1e-9) on every
  /// repetition where both ran.
  bool scores_agree = true;
};

struct BenchReport {
  std::vector<BenchRow> rows;
  std::vector<LevelProfileRow> levels;
  std::vector<BenchSummaryRow> summary;
};

/// Seed of the synthetic dataset for (p, repetition).
std::uint64_t bench_dataset_seed(std::uint64_t seed, int p, int repetition);

/// Runs every algorithm for each p in [p_min, p_max] and each repetition on
/// the same dataset. Algorithms refusing a size (cap or budget) produce a
/// "refused" row. on_row is called after each row.
BenchReport run_bench(const BenchConfig& config, const std::function<void(const BenchRow&)>& on_row = {});

std::vector<BenchSummaryRow> summarize(const std::vector<BenchRow>& rows);

extern const char* const kBenchCsvHeader;
extern const char* const kLevelCsvHeader;

/// Appends rows; the header is written only when the file is new or empty.
void append_bench_csv(const std::filesystem::path& path, const std::vector<BenchRow>& rows);
std::vector<BenchRow> read_bench_csv(const std::filesystem::path& path);
void append_level_csv(const std::filesystem::path& path, const std::vector<LevelProfileRow>& rows);

std::string format_bench_row(const BenchRow& row);
void print_summary(std::ostream& out, const std::vector<BenchSummaryRow>& summary);

}  // namespace levelbn
