#include "levelbn/bench.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "levelbn/dataset.hpp"
#include "levelbn/dp_baseline.hpp"
#include "levelbn/dp_levelwise.hpp"
#include "levelbn/errors.hpp"

namespace levelbn {

const char* const kBenchCsvHeader =
    "p,algo,rep,seed,status,wall_time,peak_tracked_entries,peak_tracked_bytes,subset_evaluations_total,"
    "full_sweeps,total_log_score";
const char* const kLevelCsvHeader = "p,algo,rep,k,combinations,live_entries,level_entries";

std::uint64_t bench_dataset_seed(std::uint64_t seed, int p, int repetition) {
  return seed * 1000003ULL + static_cast<std::uint64_t>(p) * 1009ULL + static_cast<std::uint64_t>(repetition);
}

namespace {

Dataset bench_dataset(const BenchConfig& config, int p, int repetition) {
  if (config.data) {
    LoadOptions opts;
    opts.first_columns = p;
    Dataset d = load_csv(*config.data, opts);
    if (d.p() < p) {
      throw ParameterError("bench: " + config.data->string() + " has only " + std::to_string(d.p()) + " columns");
    }
    return d;
  }
  SyntheticSpec spec;
  spec.seed = bench_dataset_seed(config.seed, p, repetition);
  spec.p = p;
  spec.n = config.n;
  spec.max_arity = config.max_arity;
  spec.edge_prob = config.edge_prob;
  return generate_synthetic(spec).data;
}

void fill(BenchRow& row, const LearnedNetwork& net, const RunStats& stats) {
  row.status = "ok";
  row.wall_time_seconds = stats.wall_time_seconds;
  row.peak_tracked_entries = stats.peak_tracked_entries;
  row.peak_tracked_bytes = stats.peak_tracked_bytes;
  row.subset_evaluations_total = stats.subset_evaluations_total;
  row.full_sweeps = stats.full_sweeps;
  row.total_log_score = net.total_log_score;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

bool needs_header(const std::filesystem::path& path) {
  std::error_code ec;
  return !std::filesystem::exists(path, ec) || std::filesystem::file_size(path, ec) == 0;
}

}  // namespace

BenchReport run_bench(const BenchConfig& config, const std::function<void(const BenchRow&)>& on_row) {
  if (config.p_min < 1 || config.p_max < config.p_min || config.p_max > kMaxVariables) {
    throw ParameterError("bench: bad p range " + std::to_string(config.p_min) + ".." + std::to_string(config.p_max));
  }
  if (config.repetitions < 1) throw ParameterError("bench: repetitions must be >= 1");
  for (const auto& a : config.algos) {
    if (a != "levelwise" && a != "baseline") throw ParameterError("bench: unknown algorithm '" + a + "'");
  }

  RunOptions options;
  options.workers = config.workers;
  options.memory_budget_bytes = config.memory_budget_bytes;
  options.parent_recovery = config.parent_recovery;

  BenchReport report;
  for (int p = config.p_min; p <= config.p_max; ++p) {
    for (int rep = 0; rep < config.repetitions; ++rep) {
      const Dataset d = bench_dataset(config, p, rep);
      for (const auto& algo : config.algos) {
        BenchRow row;
        row.p = p;
        row.algo = algo;
        row.repetition = rep;
        row.seed = config.data ? 0 : bench_dataset_seed(config.seed, p, rep);
        const std::vector<LevelSize>* sizes = nullptr;
        LevelwiseResult lw;
        BaselineResult bl;
        try {
          if (algo == "levelwise") {
            lw = run_levelwise(d, options);
            fill(row, lw.network, lw.stats);
            sizes = &lw.stats.per_level_sizes;
          } else {
            bl = run_baseline(d, options);
            fill(row, bl.network, bl.stats);
            sizes = &bl.stats.per_level_sizes;
          }
        } catch (const BudgetError& e) {
          row.status = "refused";
          row.message = e.what();
        } catch (const ParameterError& e) {
          row.status = "refused";
          row.message = e.what();
        }
        if (sizes) {
          for (const auto& l : *sizes) {
            report.levels.push_back(LevelProfileRow{p, algo, rep, l.k, l.combinations, l.live_entries, l.level_entries});
          }
        }
        if (on_row) on_row(row);
        report.rows.push_back(std::move(row));
      }
    }
  }
  report.summary = summarize(report.rows);
  return report;
}

std::vector<BenchSummaryRow> summarize(const std::vector<BenchRow>& rows) {
  struct Acc {
    double time = 0.0;
    double peak = 0.0;
    int runs = 0;
  };
  std::map<int, std::map<std::string, Acc>> acc;
  std::map<std::pair<int, int>, std::map<std::string, double>> scores;
  for (const auto& r : rows) {
    auto& a = acc[r.p][r.algo];
    if (r.status != "ok") continue;
    a.time += r.wall_time_seconds;
    a.peak += static_cast<double>(r.peak_tracked_entries);
    ++a.runs;
    scores[{r.p, r.repetition}][r.algo] = r.total_log_score;
  }
  std::vector<BenchSummaryRow> out;
  for (auto& [p, algos] : acc) {
    BenchSummaryRow s;
    s.p = p;
    const Acc lw = algos["levelwise"];
    const Acc bl = algos["baseline"];
    if (lw.runs) {
      s.levelwise_time = lw.time / lw.runs;
      s.levelwise_peak_entries = lw.peak / lw.runs;
    }
    if (bl.runs) {
      s.baseline_time = bl.time / bl.runs;
      s.baseline_peak_entries = bl.peak / bl.runs;
    }
    if (lw.runs && bl.runs) {
      s.time_ratio = s.levelwise_time > 0 ? s.baseline_time / s.levelwise_time : 0.0;
      s.memory_ratio = s.levelwise_peak_entries > 0 ? s.baseline_peak_entries / s.levelwise_peak_entries : 0.0;
    }
    for (const auto& [key, by_algo] : scores) {
      if (key.first != p) continue;
      auto a = by_algo.find("levelwise");
      auto b = by_algo.find("baseline");
      if (a != by_algo.end() && b != by_algo.end() && std::abs(a->second - b->second) > 1e-9) s.scores_agree = false;
    }
    out.push_back(s);
  }
  return out;
}

std::string format_bench_row(const BenchRow& r) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), "%d,%s,%d,%llu,%s,%.6f,%llu,%llu,%llu,%d,%.17g", r.p, r.algo.c_str(), r.repetition,
                static_cast<unsigned long long>(r.seed), r.status.c_str(), r.wall_time_seconds,
                static_cast<unsigned long long>(r.peak_tracked_entries),
                static_cast<unsigned long long>(r.peak_tracked_bytes),
                static_cast<unsigned long long>(r.subset_evaluations_total), r.full_sweeps, r.total_log_score);
  return buf;
}

void append_bench_csv(const std::filesystem::path& path, const std::vector<BenchRow>& rows) {
  const bool header = needs_header(path);
  std::ofstream out(path, std::ios::app);
  if (!out) throw IngestError("cannot open " + path.string() + " for appending");
  if (header) out << kBenchCsvHeader << '\n';
  for (const auto& r : rows) out << format_bench_row(r) << '\n';
}

std::vector<BenchRow> read_bench_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IngestError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != kBenchCsvHeader) {
    throw IngestError(path.string() + ": unexpected bench header");
  }
  std::vector<BenchRow> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != 11) throw IngestError(path.string() + ": row " + std::to_string(line_no) + " has wrong width");
    BenchRow r;
    try {
      r.p = std::stoi(cells[0]);
      r.algo = cells[1];
      r.repetition = std::stoi(cells[2]);
      r.seed = std::stoull(cells[3]);
      r.status = cells[4];
      r.wall_time_seconds = std::stod(cells[5]);
      r.peak_tracked_entries = std::stoull(cells[6]);
      r.peak_tracked_bytes = std::stoull(cells[7]);
      r.subset_evaluations_total = std::stoull(cells[8]);
      r.full_sweeps = std::stoi(cells[9]);
      r.total_log_score = std::stod(cells[10]);
    } catch (const std::logic_error&) {
      throw IngestError(path.string() + ": row " + std::to_string(line_no) + " is malformed");
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

void append_level_csv(const std::filesystem::path& path, const std::vector<LevelProfileRow>& rows) {
  const bool header = needs_header(path);
  std::ofstream out(path, std::ios::app);
  if (!out) throw IngestError("cannot open " + path.string() + " for appending");
  if (header) out << kLevelCsvHeader << '\n';
  for (const auto& r : rows) {
    out << r.p << ',' << r.algo << ',' << r.repetition << ',' << r.k << ',' << r.combinations << ','
        << r.live_entries << ',' << r.level_entries << '\n';
  }
}

void print_summary(std::ostream& out, const std::vector<BenchSummaryRow>& summary) {
  char buf[256];
  out << "   p  levelwise_s   baseline_s  time_ratio  levelwise_peak  baseline_peak  mem_ratio  scores\n";
  for (const auto& s : summary) {
    std::snprintf(buf, sizeof(buf), "%4d  %11.4f  %11.4f  %10.3f  %14.0f  %13.0f  %9.3f  %s\n", s.p, s.levelwise_time,
                  s.baseline_time, s.time_ratio, s.levelwise_peak_entries, s.baseline_peak_entries, s.memory_ratio,
                  s.scores_agree ? "agree" : "DIFFER");
    out << buf;
  }
}

}  // namespace levelbn
