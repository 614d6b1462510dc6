#include <algorithm>
#include <numeric>
#include <random>

#include "levelbn/dataset.hpp"
#include "levelbn/errors.hpp"

namespace levelbn {

int TrueDag::edge_count() const {
  int e = 0;
  for (VarSet ps : parents) e += ps.size();
  return e;
}

SyntheticData generate_synthetic(const SyntheticSpec& spec) {
  if (spec.n < 1) throw ParameterError("generate_synthetic: n must be >= 1");
  if (spec.p < 1 || spec.p > kMaxVariables) throw ParameterError("generate_synthetic: p out of range");
  if (spec.max_arity < 2 || spec.max_arity > 4) throw ParameterError("generate_synthetic: max_arity must be in [2,4]");
  if (!(spec.edge_prob >= 0.0 && spec.edge_prob <= 1.0)) {
    throw ParameterError("generate_synthetic: edge_prob must be in [0,1]");
  }

  std::mt19937_64 rng(spec.seed);
  const int p = spec.p;

  TrueDag dag;
  dag.order.resize(static_cast<std::size_t>(p));
  std::iota(dag.order.begin(), dag.order.end(), 0);
  std::shuffle(dag.order.begin(), dag.order.end(), rng);
  dag.parents.assign(static_cast<std::size_t>(p), VarSet{});
  std::bernoulli_distribution edge(spec.edge_prob);
  for (int j = 1; j < p; ++j) {
    for (int i = 0; i < j; ++i) {
      if (edge(rng)) {
        auto& ps = dag.parents[static_cast<std::size_t>(dag.order[static_cast<std::size_t>(j)])];
        ps = ps.with(dag.order[static_cast<std::size_t>(i)]);
      }
    }
  }

  std::uniform_int_distribution<int> arity_dist(2, spec.max_arity);
  std::vector<int> arity(static_cast<std::size_t>(p));
  for (auto& a : arity) a = arity_dist(rng);

  // cpt[v] holds one Dirichlet(1,...,1) row per parent configuration,
  // configurations mixed-radix over parents in ascending index order.
  std::exponential_distribution<double> gamma1(1.0);
  std::vector<std::vector<double>> cpt(static_cast<std::size_t>(p));
  for (int v = 0; v < p; ++v) {
    std::size_t configs = 1;
    dag.parents[static_cast<std::size_t>(v)].for_each(
        [&](int u) { configs *= static_cast<std::size_t>(arity[static_cast<std::size_t>(u)]); });
    const auto a = static_cast<std::size_t>(arity[static_cast<std::size_t>(v)]);
    auto& table = cpt[static_cast<std::size_t>(v)];
    table.resize(configs * a);
    for (std::size_t c = 0; c < configs; ++c) {
      double sum = 0.0;
      for (std::size_t x = 0; x < a; ++x) sum += table[c * a + x] = gamma1(rng);
      for (std::size_t x = 0; x < a; ++x) table[c * a + x] /= sum;
    }
  }

  std::vector<std::vector<std::uint32_t>> columns(static_cast<std::size_t>(p),
                                                  std::vector<std::uint32_t>(static_cast<std::size_t>(spec.n)));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int row = 0; row < spec.n; ++row) {
    for (int v : dag.order) {
      std::size_t config = 0;
      std::size_t stride = 1;
      dag.parents[static_cast<std::size_t>(v)].for_each([&](int u) {
        config += columns[static_cast<std::size_t>(u)][static_cast<std::size_t>(row)] * stride;
        stride *= static_cast<std::size_t>(arity[static_cast<std::size_t>(u)]);
      });
      const auto a = static_cast<std::size_t>(arity[static_cast<std::size_t>(v)]);
      const double* probs = &cpt[static_cast<std::size_t>(v)][config * a];
      const double u = unit(rng);
      double acc = 0.0;
      std::size_t x = 0;
      for (; x + 1 < a; ++x) {
        acc += probs[x];
        if (u < acc) break;
      }
      columns[static_cast<std::size_t>(v)][static_cast<std::size_t>(row)] = static_cast<std::uint32_t>(x);
    }
  }

  std::vector<VariableMeta> meta(static_cast<std::size_t>(p));
  for (int v = 0; v < p; ++v) {
    meta[static_cast<std::size_t>(v)].name = "V" + std::to_string(v);
    meta[static_cast<std::size_t>(v)].arity = arity[static_cast<std::size_t>(v)];
  }
  return SyntheticData{Dataset(std::move(meta), std::move(columns)), std::move(dag)};
}

}  // namespace levelbn
