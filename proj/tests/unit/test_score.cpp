#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"

#include "levelbn/errors.hpp"
#include "levelbn/score.hpp"
#include "support/fixtures.hpp"

using namespace levelbn;
using namespace levelbn::testing;

namespace {

// Joint configuration of s in each row as a single symbol.
std::vector<std::uint64_t> row_symbols(const Dataset& d, VarSet s) {
  std::vector<std::uint64_t> out;
  for (int i = 0; i < d.n(); ++i) {
    std::uint64_t code = 0;
    s.for_each([&](int v) { code = code * 16 + d.cell(i, v); });
    out.push_back(code);
  }
  return out;
}

double sigma_of(const Dataset& d, VarSet s) {
  double sigma = 1;
  s.for_each([&](int v) { sigma *= d.arity(v); });
  return sigma;
}

double log_q(const Dataset& d, VarSet s) {
  if (s.empty()) return 0.0;
  return q_closed(count_configurations(d, s), static_cast<std::uint64_t>(d.n()));
}

}  // namespace

TEST_CASE("golden values on the five-row example") {
  const Dataset d = golden_dataset();
  const VarSet x = VarSet::singleton(0);
  const VarSet y = VarSet::singleton(1);
  ScoreCounter counter;
  CHECK(std::abs(q_subset(d, x, counter) - std::log(3.0 / 256.0)) < 1e-12);
  CHECK(std::abs(q_subset(d, x, counter) - (-4.446565155811453)) < 1e-12);
  CHECK(std::abs(q_subset(d, x | y, counter) - std::log(1.0 / 7680.0)) < 1e-12);
  const double cond = q_conditional(q_subset(d, x | y, counter), q_subset(d, y, counter));
  CHECK(std::abs(cond - std::log(1.0 / 90.0)) < 1e-12);
  CHECK(std::abs(cond - (-4.499809670330265)) < 1e-12);
  // Y has the same marginal counts as X (2 zeros, 3 ones).
  CHECK(std::abs(q_subset(d, x, counter) + q_subset(d, y, counter) - (-8.893130311622906)) < 1e-12);
  CHECK(counter.subset_evaluations() == 7);

  const std::vector<std::uint64_t> xs{0, 1, 0, 1, 1};
  CHECK(std::abs(q_sequential(xs, 2.0) - std::log(3.0 / 256.0)) < 1e-12);
}

TEST_CASE("sequential and closed forms agree on random instances, also under row shuffles") {
  std::mt19937_64 rng(2024);
  int instances = 0;
  for (int trial = 0; trial < 120; ++trial) {
    const int p = static_cast<int>(rng() % 4) + 1;
    const int n = static_cast<int>(rng() % 200) + 1;
    const Dataset d = random_dataset(rng(), p, n, 3);
    std::vector<std::size_t> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    const Dataset shuffled = d.permute_rows(perm);
    for (std::uint32_t m = 1; m < (1U << p); ++m) {
      const VarSet s(m);
      const double closed = log_q(d, s);
      const double seq = q_sequential(row_symbols(d, s), sigma_of(d, s));
      const double seq_shuffled = q_sequential(row_symbols(shuffled, s), sigma_of(d, s));
      REQUIRE(std::abs(seq - closed) < 1e-10);
      REQUIRE(std::abs(seq_shuffled - closed) < 1e-10);
      ++instances;
    }
  }
  CHECK(instances >= 200);
}

TEST_CASE("Scorer agrees with the closed form") {
  const Dataset d = random_dataset(77, 6, 150, 4);
  const Scorer scorer(d);
  ScoreWorkspace ws;
  for (std::uint32_t m = 1; m < 64; ++m) {
    CHECK(std::abs(scorer.q_subset(VarSet(m), ws) - log_q(d, VarSet(m))) < 1e-10);
  }
  CHECK(ws.evaluations == 63);
  CHECK(scorer.q_subset(VarSet{}, ws) == 0.0);
  CHECK(ws.evaluations == 63);
  ScoreCounter counter;
  ws.flush(counter);
  CHECK(counter.subset_evaluations() == 63);
  CHECK(ws.evaluations == 0);
}

TEST_CASE("Markov-equivalent three-variable structures score identically") {
  std::mt19937_64 rng(5);
  const VarSet x = VarSet::singleton(0), y = VarSet::singleton(1), z = VarSet::singleton(2);
  for (int trial = 0; trial < 60; ++trial) {
    const Dataset d = structured_dataset(rng(), 3, static_cast<int>(rng() % 150) + 20, 3);
    auto q = [&](VarSet s) { return log_q(d, s); };
    const double chain_xyz = q(x) + (q(x | y) - q(x)) + (q(y | z) - q(y));
    const double chain_zyx = q(z) + (q(y | z) - q(z)) + (q(x | y) - q(y));
    const double fork = q(y) + (q(x | y) - q(y)) + (q(y | z) - q(y));
    const double identity = q(x | y) + q(y | z) - q(y);
    CHECK(std::abs(chain_xyz - chain_zyx) < 1e-10);
    CHECK(std::abs(chain_xyz - fork) < 1e-10);
    CHECK(std::abs(fork - identity) < 1e-10);
  }
}

TEST_CASE("log_rising is lgamma(x+n) - lgamma(x) and continuous across its switch") {
  for (double x : {0.5, 1.0, 2.5, 17.0, 999.0}) {
    for (std::uint64_t n : {1ULL, 5ULL, 200ULL, 100000ULL}) {
      const double ref = std::lgamma(x + static_cast<double>(n)) - std::lgamma(x);
      CHECK(log_rising(x, n) == doctest::Approx(ref).epsilon(1e-12));
    }
  }
  CHECK(log_rising(3.0, 0) == 0.0);
  // Both sides of x = 1000 agree with a direct sum of logs.
  for (double x : {999.5, 1000.0, 1000.5, 5.0e8}) {
    double direct = 0;
    for (int i = 0; i < 50; ++i) direct += std::log(x + i);
    CHECK(log_rising(x, 50) == doctest::Approx(direct).epsilon(1e-13));
  }
}

TEST_CASE("score domain errors") {
  CHECK(q_sequential({}, 2.0) == 0.0);
  const std::vector<std::uint64_t> xs{1, 2};
  CHECK_THROWS_AS(q_sequential(xs, 0.5), ParameterError);
  ContingencyCounts bad;
  bad.sigma = 2;
  bad.entries = {{0, 3}};
  CHECK_THROWS_AS(q_closed(bad, 4), ParameterError);
  ScoreCounter counter;
  CHECK_THROWS_AS(q_subset(golden_dataset(), VarSet{}, counter), ParameterError);
  CHECK_THROWS_AS(q_subset(golden_dataset(), VarSet::singleton(2), counter), ParameterError);
}

TEST_CASE("log Q of a nonempty subset is never positive") {
  const Dataset d = random_dataset(8, 4, 1, 3);
  for (std::uint32_t m = 1; m < 16; ++m) CHECK(log_q(d, VarSet(m)) <= 0.0);
}
