#include "levelbn/oracle.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

#include "levelbn/errors.hpp"

namespace levelbn {

namespace {

std::vector<double> all_subset_scores(const Dataset& d) {
  const std::size_t subsets = std::size_t{1} << d.p();
  std::vector<double> q(subsets, 0.0);
  for (std::size_t m = 1; m < subsets; ++m) {
    q[m] = q_closed(count_configurations(d, VarSet(static_cast<std::uint32_t>(m))), static_cast<std::uint64_t>(d.n()));
  }
  return q;
}

}  // namespace

OracleResult best_over_orders(const Dataset& d) {
  const int p = d.p();
  if (p > kOrderOracleMaxP) {
    throw ParameterError("best_over_orders: p=" + std::to_string(p) + " exceeds " + std::to_string(kOrderOracleMaxP));
  }
  const std::vector<double> q = all_subset_scores(d);
  OracleResult res;
  std::vector<int> order(static_cast<std::size_t>(p));
  std::iota(order.begin(), order.end(), 0);
  std::vector<VarSet> parents(static_cast<std::size_t>(p));
  do {
    ++res.orders_examined;
    double total = 0.0;
    VarSet before;
    for (int x : order) {
      double best = kNegInf;
      VarSet best_set;
      // Every subset of the predecessors, by submask enumeration.
      for (std::uint32_t t = before.mask();; t = (t - 1) & before.mask()) {
        const VarSet ts(t);
        const double cand = q[ts.with(x).mask()] - q[t];
        if (better_parent_set(cand, ts, best, best_set)) {
          best = cand;
          best_set = ts;
        }
        if (t == 0) break;
      }
      parents[static_cast<std::size_t>(x)] = best_set;
      total += best;
      before = before.with(x);
    }
    if (total > res.best_log_score) {
      res.best_log_score = total;
      res.best_network.order = order;
      res.best_network.parents = parents;
      res.best_network.total_log_score = total;
    }
  } while (std::next_permutation(order.begin(), order.end()));
  return res;
}

OracleResult best_over_dags(const Dataset& d) {
  const int p = d.p();
  if (p > kDagOracleMaxP) {
    throw ParameterError("best_over_dags: p=" + std::to_string(p) + " exceeds " + std::to_string(kDagOracleMaxP));
  }
  const std::vector<double> q = all_subset_scores(d);
  std::vector<std::pair<int, int>> arcs;  // (parent, child)
  for (int u = 0; u < p; ++u) {
    for (int v = 0; v < p; ++v) {
      if (u != v) arcs.emplace_back(u, v);
    }
  }
  OracleResult res;
  const std::uint64_t graphs = std::uint64_t{1} << arcs.size();
  std::vector<VarSet> parents(static_cast<std::size_t>(p));
  for (std::uint64_t g = 0; g < graphs; ++g) {
    std::fill(parents.begin(), parents.end(), VarSet{});
    for (std::size_t a = 0; a < arcs.size(); ++a) {
      if ((g >> a) & 1U) {
        auto& ps = parents[static_cast<std::size_t>(arcs[a].second)];
        ps = ps.with(arcs[a].first);
      }
    }
    // Kahn's algorithm, smallest ready id first.
    std::vector<int> order;
    VarSet placed;
    while (static_cast<int>(order.size()) < p) {
      int next = -1;
      for (int v = 0; v < p && next < 0; ++v) {
        if (!placed.contains(v) && parents[static_cast<std::size_t>(v)].is_subset_of(placed)) next = v;
      }
      if (next < 0) break;
      order.push_back(next);
      placed = placed.with(next);
    }
    if (static_cast<int>(order.size()) < p) continue;  // cyclic
    ++res.dags_examined;
    double total = 0.0;
    for (int v = 0; v < p; ++v) {
      const VarSet ps = parents[static_cast<std::size_t>(v)];
      total += q[ps.with(v).mask()] - q[ps.mask()];
    }
    if (total > res.best_log_score) {
      res.best_log_score = total;
      res.best_network.order = order;
      res.best_network.parents = parents;
      res.best_network.total_log_score = total;
    }
  }
  return res;
}

}  // namespace levelbn
