#pragma once

#include <span>
#include <string>
#include <string_view>

#include "json.hpp"

#include "levelbn/dataset.hpp"
#include "levelbn/network.hpp"

namespace levelbn {

inline constexpr int kResultSchemaVersion = 1;

/// Graphviz digraph: one node statement per variable (by index), then one
/// edge statement per parent -> child pair ordered by (parent, child).
std::string export_dot(const LearnedNetwork& net, std::span<const std::string> names);

/// {"order": [...], "parents": {child: [parents...]}, "total_log_score": x}
/// with variables by name. Parents are listed in ascending index order.
nlohmann::ordered_json network_json(const LearnedNetwork& net, std::span<const std::string> names);

/// Deterministic counters only; wall time is reported separately.
nlohmann::ordered_json stats_json(const RunStats& stats);

/// Full result document: version, dataset fingerprint, algo, network, stats.
nlohmann::ordered_json result_json(const Dataset& d, std::string_view algo, const LearnedNetwork& net,
                                   const RunStats& stats);

/// 16 lowercase hex digits.
std::string hex64(std::uint64_t v);

}  // namespace levelbn
