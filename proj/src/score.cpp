#include "levelbn/score.hpp"

#include <cmath>
#include <map>

#include "levelbn/errors.hpp"

namespace levelbn {

namespace {

double lgamma_safe(double x) {
  int sign = 0;
  return ::lgamma_r(x, &sign);
}

double half_term(std::uint64_t count) {
  return count == 0 ? 0.0 : lgamma_safe(static_cast<double>(count) + 0.5) - lgamma_safe(0.5);
}

// Stirling series tail 1/(12z) - 1/(360z^3) + 1/(1260z^5).
double stirling_tail(double z) {
  const double inv = 1.0 / z;
  const double inv2 = inv * inv;
  return inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 / 1260.0));
}

}  // namespace

double log_rising(double x, std::uint64_t n) {
  if (n == 0) return 0.0;
  const double dn = static_cast<double>(n);
  if (x < 1000.0) return lgamma_safe(x + dn) - lgamma_safe(x);
  // Difference of Stirling expansions; avoids cancelling two huge lgamma values.
  return (x - 0.5) * std::log1p(dn / x) + dn * std::log(x + dn) - dn + stirling_tail(x + dn) - stirling_tail(x);
}

LogScore q_sequential(std::span<const std::uint64_t> values, double sigma) {
  if (!(sigma >= 1.0)) throw ParameterError("q_sequential: sigma must be >= 1");
  std::map<std::uint64_t, std::uint64_t> seen;
  LogScore total = 0.0;
  double i = 0.0;
  for (std::uint64_t v : values) {
    std::uint64_t& c = seen[v];
    total += std::log(static_cast<double>(c) + 0.5) - std::log(i + 0.5 * sigma);
    ++c;
    i += 1.0;
  }
  return total;
}

LogScore q_closed(const ContingencyCounts& counts, std::uint64_t n) {
  if (counts.total() != n) {
    throw ParameterError("q_closed: counts sum to " + std::to_string(counts.total()) + ", expected n=" +
                         std::to_string(n));
  }
  LogScore total = -log_rising(0.5 * counts.sigma, n);
  for (const auto& [code, c] : counts.entries) total += half_term(c);
  return total;
}

Scorer::Scorer(const Dataset& d) : data_(&d) {
  half_.resize(static_cast<std::size_t>(d.n()) + 1);
  for (std::size_t c = 0; c < half_.size(); ++c) half_[c] = half_term(c);
}

LogScore Scorer::q_subset(VarSet s, ScoreWorkspace& ws) const {
  if (s.empty()) return 0.0;
  LogScore sum = 0.0;
  const double sigma = ws.counting.for_each_count(*data_, s, [&](std::uint64_t, std::uint64_t count) {
    sum += half_[count];
  });
  ++ws.evaluations;
  return sum - log_rising(0.5 * sigma, static_cast<std::uint64_t>(data_->n()));
}

LogScore q_subset(const Dataset& d, VarSet s, ScoreCounter& counter) {
  if (s.empty()) throw ParameterError("q_subset: empty subset (log Q of the empty set is 0 by convention)");
  if (s.highest() >= d.p()) throw ParameterError("q_subset: subset " + s.to_string() + " exceeds p");
  Scorer scorer(d);
  ScoreWorkspace ws;
  const LogScore q = scorer.q_subset(s, ws);
  ws.flush(counter);
  return q;
}

}  // namespace levelbn
