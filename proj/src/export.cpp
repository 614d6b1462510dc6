#include "levelbn/export.hpp"

#include <cstdio>
#include <sstream>

namespace levelbn {

namespace {

std::string dot_id(const std::string& name) {
  std::string out = "\"";
  for (char c : name) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string export_dot(const LearnedNetwork& net, std::span<const std::string> names) {
  std::ostringstream out;
  out << "digraph network {\n";
  for (std::size_t v = 0; v < names.size(); ++v) out << "  " << dot_id(names[v]) << ";\n";
  for (std::size_t u = 0; u < names.size(); ++u) {
    for (std::size_t v = 0; v < net.parents.size(); ++v) {
      if (net.parents[v].contains(static_cast<int>(u))) {
        out << "  " << dot_id(names[u]) << " -> " << dot_id(names[v]) << ";\n";
      }
    }
  }
  out << "}\n";
  return out.str();
}

nlohmann::ordered_json network_json(const LearnedNetwork& net, std::span<const std::string> names) {
  nlohmann::ordered_json j;
  auto& order = j["order"] = nlohmann::ordered_json::array();
  for (int v : net.order) order.push_back(names[static_cast<std::size_t>(v)]);
  auto& parents = j["parents"] = nlohmann::ordered_json::object();
  for (std::size_t v = 0; v < net.parents.size(); ++v) {
    auto& list = parents[names[v]] = nlohmann::ordered_json::array();
    net.parents[v].for_each([&](int u) { list.push_back(names[static_cast<std::size_t>(u)]); });
  }
  j["total_log_score"] = net.total_log_score;
  return j;
}

nlohmann::ordered_json stats_json(const RunStats& stats) {
  nlohmann::ordered_json j;
  j["subset_evaluations_main"] = stats.subset_evaluations_main;
  j["subset_evaluations_total"] = stats.subset_evaluations_total;
  j["full_sweeps"] = stats.full_sweeps;
  j["peak_tracked_entries"] = stats.peak_tracked_entries;
  j["peak_tracked_bytes"] = stats.peak_tracked_bytes;
  auto& levels = j["per_level_sizes"] = nlohmann::ordered_json::array();
  for (const auto& l : stats.per_level_sizes) {
    levels.push_back({{"k", l.k}, {"combinations", l.combinations}, {"live_entries", l.live_entries}, {"level_entries", l.level_entries}});
  }
  return j;
}

nlohmann::ordered_json result_json(const Dataset& d, std::string_view algo, const LearnedNetwork& net,
                                   const RunStats& stats) {
  const std::vector<std::string> names = d.names();
  nlohmann::ordered_json j;
  j["version"] = kResultSchemaVersion;
  j["dataset"] = {{"fingerprint", hex64(d.fingerprint())}, {"n", d.n()}, {"p", d.p()}, {"variables", names}};
  j["algo"] = algo;
  j["network"] = network_json(net, names);
  j["stats"] = stats_json(stats);
  return j;
}

}  // namespace levelbn
