#include "levelbn/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

#include "CLI11.hpp"

#include "levelbn/bench.hpp"
#include "levelbn/dataset.hpp"
#include "levelbn/dp_baseline.hpp"
#include "levelbn/dp_levelwise.hpp"
#include "levelbn/errors.hpp"
#include "levelbn/export.hpp"
#include "levelbn/memory.hpp"
#include "levelbn/oracle.hpp"

namespace levelbn {

namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

std::string gib(std::uint64_t bytes) { return fixed(static_cast<double>(bytes) / (1024.0 * 1024.0 * 1024.0), 4); }

struct DataArgs {
  std::string path;
  std::vector<std::string> vars;
  int first = 0;
  std::vector<std::string> arities;
  bool no_sidecar = false;

  void attach(CLI::App* cmd, bool with_vars) {
    cmd->add_option("--data", path, "CSV file with a header row")->required();
    if (with_vars) {
      cmd->add_option("--vars", vars, "Use only these columns, in this order")->delimiter(',');
      cmd->add_option("--first", first, "Use only the first N columns")->check(CLI::PositiveNumber);
    }
    cmd->add_option("--arity", arities, "Declared arity NAME=K (repeatable)");
    cmd->add_flag("--no-sidecar", no_sidecar, "Ignore <stem>.meta.json");
  }

  Dataset load() const {
    LoadOptions opts;
    opts.columns = vars;
    opts.first_columns = first;
    opts.use_sidecar = !no_sidecar;
    for (const auto& spec : arities) {
      const auto eq = spec.find('=');
      int k = 0;
      try {
        if (eq == std::string::npos || eq == 0) throw std::invalid_argument(spec);
        k = std::stoi(spec.substr(eq + 1));
      } catch (const std::logic_error&) {
        throw ParameterError("--arity expects NAME=K, got '" + spec + "'");
      }
      opts.declared_arities[spec.substr(0, eq)] = k;
    }
    return load_csv(path, opts);
  }
};

struct RunArgs {
  int workers = 1;
  std::string budget;
  int max_p = 0;
  std::string recovery = "sink-parents";

  void attach(CLI::App* cmd) {
    cmd->add_option("--workers", workers, "Worker threads")->check(CLI::Range(1, 256));
    cmd->add_option("--budget", budget, "Memory budget, e.g. 512M or 16G (default: $LEVELBN_MEMORY_BUDGET or 16G)");
    cmd->add_option("--max-p", max_p, "Override the variable-count cap")->check(CLI::Range(1, kMaxVariables));
    cmd->add_option("--parent-recovery", recovery, "sink-parents or recompute (levelwise only)")
        ->check(CLI::IsMember({"sink-parents", "recompute"}));
  }

  RunOptions options() const {
    RunOptions o;
    o.workers = workers;
    o.max_p = max_p;
    o.parent_recovery = *parse_parent_recovery(recovery);
    if (!budget.empty()) {
      const auto bytes = parse_byte_size(budget);
      if (!bytes || *bytes == 0) throw ParameterError("--budget: cannot parse '" + budget + "'");
      o.memory_budget_bytes = *bytes;
    }
    return o;
  }
};

struct Learned {
  LearnedNetwork network;
  RunStats stats;
};

Learned learn_with(const std::string& algo, const Dataset& d, const RunOptions& options) {
  if (algo == "baseline") {
    auto r = run_baseline(d, options);
    return {std::move(r.network), std::move(r.stats)};
  }
  auto r = run_levelwise(d, options);
  return {std::move(r.network), std::move(r.stats)};
}

VarSet lookup(const Dataset& d, const std::vector<std::string>& names, const char* flag) {
  VarSet s;
  for (const auto& name : names) {
    const auto j = d.index_of(name);
    if (!j) throw ParameterError(std::string(flag) + ": no column named '" + name + "'");
    s = s.with(*j);
  }
  return s;
}

int cmd_learn(const DataArgs& data, const RunArgs& run, const std::string& algo, const std::string& out_json,
              const std::string& out_dot, std::ostream& out) {
  const Dataset d = data.load();
  const Learned res = learn_with(algo, d, run.options());
  const auto names = d.names();
  if (!out_json.empty()) {
    std::ofstream f(out_json);
    if (!f) throw IngestError("cannot write " + out_json);
    f << result_json(d, algo, res.network, res.stats).dump(2) << '\n';
  }
  if (!out_dot.empty()) {
    std::ofstream f(out_dot);
    if (!f) throw IngestError("cannot write " + out_dot);
    f << export_dot(res.network, names);
  }
  out << "algo=" << algo << " p=" << d.p() << " n=" << d.n() << " total_log_score=" << fixed(res.network.total_log_score, 9)
      << " edges=" << res.network.edge_count() << " wall_time=" << fixed(res.stats.wall_time_seconds, 3) << "s"
      << " peak_entries=" << res.stats.peak_tracked_entries << " evaluations=" << res.stats.subset_evaluations_total
      << '\n';
  return kExitOk;
}

int cmd_score(const DataArgs& data, const std::vector<std::string>& vars, const std::vector<std::string>& given,
              std::ostream& out) {
  const Dataset d = data.load();
  const VarSet x = lookup(d, vars, "--vars");
  const VarSet y = lookup(d, given, "--given");
  if (x.empty()) throw ParameterError("--vars: at least one variable is required");
  if (!(x & y).empty()) throw ParameterError("--vars and --given overlap");
  ScoreCounter counter;
  const double joint = q_subset(d, x | y, counter);
  const double cond = y.empty() ? joint : q_conditional(joint, q_subset(d, y, counter));
  auto join = [](const std::vector<std::string>& v) {
    std::string s;
    for (const auto& name : v) s += (s.empty() ? "" : ",") + name;
    return s;
  };
  out << "log Q(" << join(vars) << (given.empty() ? "" : " | " + join(given)) << ") = " << fixed(cond, 12) << '\n';
  return kExitOk;
}

struct OracleArgs {
  int trials = 50;
  int p = 5;
  int n = 100;
  std::uint64_t seed = 1;
  int max_arity = 3;
  double edge_prob = 0.5;
  int workers = 1;
  bool inject_fault = false;
};

int cmd_oracle_check(const OracleArgs& a, std::ostream& out, std::ostream& err) {
  constexpr double kTolerance = 1e-9;
  RunOptions options;
  options.workers = a.workers;
  if (a.inject_fault) options.mutation = Mutation::kInvertSinkChoice;
  int mismatches = 0;
  for (int t = 0; t < a.trials; ++t) {
    SyntheticSpec spec;
    spec.seed = a.seed + static_cast<std::uint64_t>(t);
    spec.p = a.p;
    spec.n = a.n;
    spec.max_arity = a.max_arity;
    spec.edge_prob = a.edge_prob;
    const Dataset d = generate_synthetic(spec).data;
    const double oracle = best_over_orders(d).best_log_score;
    std::vector<std::pair<std::string, double>> found{{"levelwise", run_levelwise(d, options).network.total_log_score},
                                                      {"baseline", run_baseline(d, options).network.total_log_score}};
    if (a.p <= kDagOracleMaxP) found.emplace_back("dag-oracle", best_over_dags(d).best_log_score);
    for (const auto& [name, value] : found) {
      if (std::abs(value - oracle) > kTolerance) {
        ++mismatches;
        err << "MISMATCH trial=" << t << " seed=" << spec.seed << " p=" << a.p << " n=" << a.n
            << " max_arity=" << a.max_arity << " edge_prob=" << a.edge_prob << " fingerprint=" << hex64(d.fingerprint())
            << " method=" << name << " found=" << fixed(value, 12) << " oracle=" << fixed(oracle, 12) << '\n';
      }
    }
  }
  out << "oracle-check: trials=" << a.trials << " p=" << a.p << " n=" << a.n << " mismatches=" << mismatches << '\n';
  return mismatches == 0 ? kExitOk : kExitFailure;
}

int cmd_generate(const SyntheticSpec& spec, const std::string& path, std::ostream& out) {
  const SyntheticData s = generate_synthetic(spec);
  write_csv(s.data, path);
  write_sidecar(s.data, path);
  out << "wrote " << path << " p=" << s.data.p() << " n=" << s.data.n() << " true_edges=" << s.dag.edge_count()
      << " sidecar=" << sidecar_path(path).string() << '\n';
  return kExitOk;
}

int cmd_profile(int p, const std::string& algo, const std::string& recovery, std::ostream& out) {
  if (algo == "baseline") {
    const AccountingReport r = baseline_peak_entries(p);
    out << "algo=baseline p=" << p << " peak_entries=" << r.peak_entries << " peak_bytes=" << r.peak_bytes
        << " peak_gib=" << gib(r.peak_bytes) << " parent_score_entries=" << r.parent_score_entries
        << " parent_set_entries=" << r.parent_set_entries << " subset_score_entries=" << r.subset_score_entries
        << " sink_entries=" << r.sink_entries << '\n';
    return kExitOk;
  }
  const AccountingReport r = estimate_peak_entries(p, *parse_parent_recovery(recovery));
  out << "k,combinations,entries,bytes,parent_score_entries,parent_score_bytes,parent_score_gib,live_entries\n";
  for (const auto& l : r.levels) {
    out << l.k << ',' << l.combinations << ',' << l.entries << ',' << l.bytes << ',' << l.parent_score_entries << ','
        << l.parent_score_bytes << ',' << gib(l.parent_score_bytes) << ',' << l.live_entries << '\n';
  }
  out << "algo=levelwise p=" << p << " parent_recovery=" << recovery << " peak_level=" << r.peak_level
      << " peak_entries=" << r.peak_entries << " peak_bytes=" << r.peak_bytes << " peak_gib=" << gib(r.peak_bytes)
      << " peak_parent_score_entries=" << r.peak_parent_score_entries << " sink_entries=" << r.sink_entries << '\n';
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact Bayesian network structure learning with a level-wise dynamic program", "levelbn"};
  app.require_subcommand(1);

  // learn
  auto* learn = app.add_subcommand("learn", "Learn the highest-scoring network");
  DataArgs learn_data;
  RunArgs learn_run;
  std::string algo = "levelwise", out_json, out_dot;
  learn_data.attach(learn, true);
  learn_run.attach(learn);
  learn->add_option("--algo", algo, "levelwise or baseline")->check(CLI::IsMember({"levelwise", "baseline"}));
  learn->add_option("--out", out_json, "Write the result as JSON");
  learn->add_option("--dot", out_dot, "Write the network as Graphviz DOT");

  // score
  auto* score = app.add_subcommand("score", "Print log Q(vars) or log Q(vars | given)");
  DataArgs score_data;
  std::vector<std::string> score_vars, score_given;
  score_data.attach(score, false);
  score->add_option("--vars", score_vars, "Scored variables")->delimiter(',')->required();
  score->add_option("--given", score_given, "Conditioning variables")->delimiter(',');

  // bench
  auto* bench = app.add_subcommand("bench", "Time both algorithms over a range of variable counts");
  BenchConfig bc;
  RunArgs bench_run;
  std::string bench_out, levels_out, summary_out, bench_data;
  bench->add_option("--p-min", bc.p_min, "Smallest p")->check(CLI::Range(1, kMaxVariables));
  bench->add_option("--p-max", bc.p_max, "Largest p")->check(CLI::Range(1, kMaxVariables));
  bench->add_option("--n", bc.n, "Rows per synthetic dataset")->check(CLI::PositiveNumber);
  bench->add_option("--seed", bc.seed, "Base seed");
  bench->add_option("--algos", bc.algos, "Algorithms to run")
      ->delimiter(',')
      ->check(CLI::IsMember({"levelwise", "baseline"}));
  bench->add_option("--reps", bc.repetitions, "Repetitions per p")->check(CLI::PositiveNumber);
  bench->add_option("--max-arity", bc.max_arity, "Synthetic arity bound")->check(CLI::Range(2, 4));
  bench->add_option("--edge-prob", bc.edge_prob, "Synthetic edge probability")->check(CLI::Range(0.0, 1.0));
  bench->add_option("--data", bench_data, "Slice the first p columns of this CSV instead of generating");
  bench->add_option("--out", bench_out, "Append measurements to this CSV");
  bench->add_option("--levels-out", levels_out, "Append per-level sizes to this CSV");
  bench->add_option("--summary-out", summary_out, "Write the per-p summary table here");
  bench_run.attach(bench);

  // oracle-check
  auto* oracle = app.add_subcommand("oracle-check", "Compare both algorithms with exhaustive search");
  OracleArgs oa;
  oracle->add_option("--trials", oa.trials, "Random datasets")->check(CLI::PositiveNumber);
  oracle->add_option("--p", oa.p, "Variables")->check(CLI::Range(1, kOrderOracleMaxP));
  oracle->add_option("--n", oa.n, "Rows")->check(CLI::PositiveNumber);
  oracle->add_option("--seed", oa.seed, "Seed of the first trial");
  oracle->add_option("--max-arity", oa.max_arity, "Arity bound")->check(CLI::Range(2, 4));
  oracle->add_option("--edge-prob", oa.edge_prob, "Edge probability")->check(CLI::Range(0.0, 1.0));
  oracle->add_option("--workers", oa.workers, "Worker threads")->check(CLI::Range(1, 256));
  oracle->add_flag("--inject-fault", oa.inject_fault, "Corrupt the sink choice (harness self-test)")->group("");

  // generate
  auto* generate = app.add_subcommand("generate", "Sample a synthetic dataset from a random network");
  SyntheticSpec gs;
  std::string gen_out;
  generate->add_option("--p", gs.p, "Variables")->check(CLI::Range(1, kMaxVariables));
  generate->add_option("--n", gs.n, "Rows")->check(CLI::PositiveNumber);
  generate->add_option("--seed", gs.seed, "Seed");
  generate->add_option("--max-arity", gs.max_arity, "Arity bound")->check(CLI::Range(2, 4));
  generate->add_option("--edge-prob", gs.edge_prob, "Edge probability")->check(CLI::Range(0.0, 1.0));
  generate->add_option("--out", gen_out, "CSV path (a .meta.json sidecar is written next to it)")->required();

  // profile
  auto* profile = app.add_subcommand("profile", "Print the predicted memory profile without running");
  int profile_p = 29;
  std::string profile_algo = "levelwise", profile_recovery = "sink-parents";
  profile->add_option("--p", profile_p, "Variables")->check(CLI::Range(1, kMaxVariables));
  profile->add_option("--algo", profile_algo, "levelwise or baseline")
      ->check(CLI::IsMember({"levelwise", "baseline"}));
  profile->add_option("--parent-recovery", profile_recovery, "sink-parents or recompute")
      ->check(CLI::IsMember({"sink-parents", "recompute"}));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*learn) return cmd_learn(learn_data, learn_run, algo, out_json, out_dot, out);
    if (*score) return cmd_score(score_data, score_vars, score_given, out);
    if (*bench) {
      if (!bench_data.empty()) bc.data = bench_data;
      const RunOptions o = bench_run.options();
      bc.workers = o.workers;
      bc.memory_budget_bytes = o.memory_budget_bytes;
      bc.parent_recovery = o.parent_recovery;
      const BenchReport report = run_bench(bc, [&](const BenchRow& row) {
        out << format_bench_row(row) << (row.message.empty() ? "" : "  # " + row.message) << '\n';
      });
      if (!bench_out.empty()) append_bench_csv(bench_out, report.rows);
      if (!levels_out.empty()) append_level_csv(levels_out, report.levels);
      print_summary(out, report.summary);
      if (!summary_out.empty()) {
        std::ofstream f(summary_out);
        if (!f) throw IngestError("cannot write " + summary_out);
        print_summary(f, report.summary);
      }
      return kExitOk;
    }
    if (*oracle) return cmd_oracle_check(oa, out, err);
    if (*generate) return cmd_generate(gs, gen_out, out);
    if (*profile) return cmd_profile(profile_p, profile_algo, profile_recovery, out);
  } catch (const BudgetError& e) {
    err << "refused: " << e.what() << " (estimate " << gib(e.estimated_bytes()) << " GiB, budget "
        << gib(e.budget_bytes()) << " GiB)\n";
    return kExitRefused;
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << '\n';
    return kExitRefused;
  } catch (const IngestError& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace levelbn
