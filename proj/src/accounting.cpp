#include "levelbn/errors.hpp"
#include "levelbn/memory.hpp"

namespace levelbn {

namespace {

void check_p(int p) {
  if (p < 1 || p > kMaxVariables) {
    throw ParameterError("accounting: p must be in [1," + std::to_string(kMaxVariables) + "], got " +
                         std::to_string(p));
  }
}

LevelAccount level_account(int p, int k) {
  LevelAccount a;
  a.k = k;
  a.combinations = binom(p, k);
  const auto kk = static_cast<std::uint64_t>(k);
  a.entries = a.combinations * (2 + 2 * kk);
  a.parent_score_entries = a.combinations * kk;
  a.parent_score_bytes = a.parent_score_entries * EntryBytes::kScore;
  a.bytes = a.combinations * (2 * EntryBytes::kScore + kk * (EntryBytes::kScore + EntryBytes::kParentSet));
  return a;
}

}  // namespace

AccountingReport estimate_peak_entries(int p, ParentRecovery mode) {
  check_p(p);
  AccountingReport rep;
  rep.p = p;
  const std::uint64_t subsets = std::uint64_t{1} << p;
  rep.sink_entries = mode == ParentRecovery::kSinkParents ? 2 * subsets : subsets;
  rep.sink_bytes = subsets * EntryBytes::kSink;
  if (mode == ParentRecovery::kSinkParents) rep.sink_bytes += subsets * EntryBytes::kParentSet;

  for (int k = 0; k <= p; ++k) rep.levels.push_back(level_account(p, k));
  rep.levels[0].live_entries = rep.levels[0].entries + rep.sink_entries;
  for (int k = 1; k <= p; ++k) {
    const LevelAccount& lo = rep.levels[static_cast<std::size_t>(k - 1)];
    LevelAccount& hi = rep.levels[static_cast<std::size_t>(k)];
    hi.live_entries = lo.entries + hi.entries + rep.sink_entries;
    const std::uint64_t bytes = lo.bytes + hi.bytes + rep.sink_bytes;
    if (hi.live_entries > rep.peak_entries) {
      rep.peak_entries = hi.live_entries;
      rep.peak_level = k;
    }
    if (bytes > rep.peak_bytes) rep.peak_bytes = bytes;
    const std::uint64_t ps = lo.parent_score_entries + hi.parent_score_entries;
    if (ps > rep.peak_parent_score_entries) rep.peak_parent_score_entries = ps;
  }
  if (mode == ParentRecovery::kRecompute) {
    // The reconstruction table (2^(p-1) scores) lives after the levels are gone
    // and never exceeds the level peak; see reconstruct_parents.
    const std::uint64_t recon = subsets / 2 + rep.sink_entries;
    if (recon > rep.peak_entries) rep.peak_entries = recon;
    const std::uint64_t recon_bytes = subsets / 2 * EntryBytes::kScore + rep.sink_bytes;
    if (recon_bytes > rep.peak_bytes) rep.peak_bytes = recon_bytes;
  }
  return rep;
}

AccountingReport baseline_peak_entries(int p) {
  check_p(p);
  AccountingReport rep;
  rep.p = p;
  const std::uint64_t subsets = std::uint64_t{1} << p;
  const std::uint64_t per_variable = subsets / 2;
  const auto pp = static_cast<std::uint64_t>(p);
  rep.parent_score_entries = pp * per_variable;
  rep.parent_set_entries = pp * per_variable;
  rep.subset_score_entries = 2 * subsets;
  rep.sink_entries = subsets;
  rep.sink_bytes = subsets * EntryBytes::kSink;
  rep.peak_parent_score_entries = rep.parent_score_entries;
  rep.peak_entries = rep.parent_score_entries + rep.parent_set_entries + rep.subset_score_entries + rep.sink_entries;
  rep.peak_bytes = rep.parent_score_entries * EntryBytes::kScore + rep.parent_set_entries * EntryBytes::kParentSet +
                   rep.subset_score_entries * EntryBytes::kScore + rep.sink_bytes;
  rep.peak_level = p;
  return rep;
}

}  // namespace levelbn
