#pragma once

#include <cstdint>

#include "levelbn/dataset.hpp"
#include "levelbn/network.hpp"

namespace levelbn {

inline constexpr int kOrderOracleMaxP = 7;
inline constexpr int kDagOracleMaxP = 4;

struct OracleResult {
  LogScore best_log_score = kNegInf;
  LearnedNetwork best_network;
  std::uint64_t orders_examined = 0;
  std::uint64_t dags_examined = 0;
};

/// Exhaustive search over all p! variable orders; for each order every
/// variable takes its best parent set among its predecessors (direct
/// enumeration). Scores come from count_configurations + q_closed, not the
/// DP scorer. Throws ParameterError for p > 7.
OracleResult best_over_orders(const Dataset& d);

/// Exhaustive search over every labeled DAG on p <= 4 variables (1, 3, 25,
/// 543 graphs). Throws ParameterError for p > 4.
OracleResult best_over_dags(const Dataset& d);

}  // namespace levelbn
