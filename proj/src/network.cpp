#include "levelbn/network.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>

namespace levelbn {

int LearnedNetwork::edge_count() const noexcept {
  int e = 0;
  for (VarSet ps : parents) e += ps.size();
  return e;
}

LogScore score_network(const Dataset& d, const LearnedNetwork& net) {
  Scorer scorer(d);
  ScoreWorkspace ws;
  LogScore total = 0.0;
  for (int v : net.order) {
    const VarSet ps = net.parents[static_cast<std::size_t>(v)];
    total += q_conditional(scorer.q_subset(ps.with(v), ws), scorer.q_subset(ps, ws));
  }
  return total;
}

bool is_consistent(const LearnedNetwork& net) {
  const int p = net.p();
  if (static_cast<int>(net.parents.size()) != p) return false;
  VarSet placed;
  for (int v : net.order) {
    if (v < 0 || v >= p || placed.contains(v)) return false;
    if (!net.parents[static_cast<std::size_t>(v)].is_subset_of(placed)) return false;
    placed = placed.with(v);
  }
  return true;
}

std::string_view to_string(ParentRecovery mode) {
  return mode == ParentRecovery::kSinkParents ? "sink-parents" : "recompute";
}

std::optional<ParentRecovery> parse_parent_recovery(std::string_view text) {
  if (text == "sink-parents") return ParentRecovery::kSinkParents;
  if (text == "recompute") return ParentRecovery::kRecompute;
  return std::nullopt;
}

std::optional<std::uint64_t> parse_byte_size(std::string_view text) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr == text.data()) return std::nullopt;
  std::string suffix(ptr, text.data() + text.size());
  std::transform(suffix.begin(), suffix.end(), suffix.begin(), [](unsigned char c) { return std::toupper(c); });
  if (suffix.size() > 1 && suffix.back() == 'B') suffix.pop_back();
  if (suffix.size() > 1 && suffix.back() == 'I') suffix.pop_back();
  int shift = 0;
  if (suffix.empty() || suffix == "B") shift = 0;
  else if (suffix == "K") shift = 10;
  else if (suffix == "M") shift = 20;
  else if (suffix == "G") shift = 30;
  else if (suffix == "T") shift = 40;
  else return std::nullopt;
  if (shift > 0 && value > (~std::uint64_t{0} >> shift)) return std::nullopt;
  return value << shift;
}

std::uint64_t default_memory_budget() {
  if (const char* env = std::getenv(kMemoryBudgetEnv)) {
    if (auto v = parse_byte_size(env)) return *v;
  }
  return std::uint64_t{16} << 30;
}

RunOptions default_run_options() {
  RunOptions opt;
  opt.memory_budget_bytes = default_memory_budget();
  return opt;
}

}  // namespace levelbn
