#include "levelbn/subset_index.hpp"

#include "levelbn/errors.hpp"

namespace levelbn {

std::string VarSet::to_string() const {
  std::string out = "{";
  bool first = true;
  for_each([&](int v) {
    if (!first) out += ',';
    out += std::to_string(v);
    first = false;
  });
  out += '}';
  return out;
}

std::uint64_t binom(int n, int k) {
  if (n < 0 || k < 0 || k > n || n > kMaxVariables) {
    throw ParameterError("binom: (n=" + std::to_string(n) + ", k=" + std::to_string(k) +
                         ") outside 0 <= k <= n <= " + std::to_string(kMaxVariables));
  }
  return detail::choose(n, k);
}

VarSet unrank(int p, int k, Rank idx) {
  if (p < 0 || p > kMaxVariables || k < 0 || k > p) {
    throw ParameterError("unrank: level " + std::to_string(k) + " invalid for p=" + std::to_string(p));
  }
  if (idx >= detail::choose(p, k)) {
    throw ParameterError("unrank: index " + std::to_string(idx) + " >= C(" + std::to_string(p) + "," +
                         std::to_string(k) + ")");
  }
  std::uint32_t mask = 0;
  int c = p - 1;
  for (int j = k; j >= 1; --j) {
    // Largest c with C(c, j) <= idx; members strictly decrease so the scan resumes.
    while (detail::choose(c, j) > idx) --c;
    mask |= std::uint32_t{1} << c;
    idx -= detail::choose(c, j);
    --c;
  }
  return VarSet(mask);
}

Rank sub_rank(VarSet s, int x) {
  if (x < 0 || x >= kMaxVariables || !s.contains(x)) {
    throw ParameterError("sub_rank: variable " + std::to_string(x) + " not in " + s.to_string());
  }
  Rank r = 0;
  int j = 1;
  for (std::uint32_t m = s.mask(); m != 0; m &= m - 1) {
    const int e = std::countr_zero(m);
    if (e == x) continue;
    r += detail::choose(e, j++);
  }
  return r;
}

void sub_ranks(VarSet s, std::span<Rank> out) noexcept {
  const Members mem = s.members();
  const int k = mem.size();
  // Members before the removed one keep their position j+1; later ones shift to j.
  Rank suffix = 0;
  for (int t = k - 1; t >= 0; --t) {
    out[static_cast<std::size_t>(t)] = suffix;
    suffix += detail::choose(mem[t], t);
  }
  Rank prefix = 0;
  for (int t = 0; t < k; ++t) {
    out[static_cast<std::size_t>(t)] += prefix;
    prefix += detail::choose(mem[t], t + 1);
  }
}

LevelRange::LevelRange(int p, int k) : LevelRange(p, k, 0, binom(p, k)) {}

LevelRange::LevelRange(int p, int k, Rank first, Rank last) : p_(p), k_(k), first_(first), last_(last) {
  const Rank total = binom(p, k);
  if (first > last || last > total) {
    throw ParameterError("LevelRange: rank block [" + std::to_string(first) + "," + std::to_string(last) +
                         ") outside [0," + std::to_string(total) + ")");
  }
}

LevelRange::iterator LevelRange::begin() const {
  if (first_ == last_) return end();
  return iterator(unrank(p_, k_, first_), last_ - first_);
}

}  // namespace levelbn
