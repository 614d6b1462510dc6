#include "support/fixtures.hpp"

#include <atomic>
#include <fstream>
#include <random>
#include <sstream>

namespace levelbn::testing {

Dataset make_dataset(const std::vector<std::vector<std::uint32_t>>& columns, const std::vector<int>& arities) {
  std::vector<VariableMeta> meta;
  for (std::size_t j = 0; j < columns.size(); ++j) {
    VariableMeta m;
    m.name = "V" + std::to_string(j);
    m.arity = arities[j];
    for (int c = 0; c < m.arity; ++c) m.labels.push_back(std::to_string(c));
    meta.push_back(std::move(m));
  }
  return Dataset(std::move(meta), columns);
}

Dataset golden_dataset() {
  std::vector<VariableMeta> meta{{"X", 2, {"0", "1"}}, {"Y", 2, {"0", "1"}}};
  return Dataset(std::move(meta), {{0, 1, 0, 1, 1}, {0, 0, 1, 1, 1}});
}

Dataset random_dataset(std::uint64_t seed, int p, int n, int max_arity) {
  std::mt19937_64 rng(seed);
  std::vector<std::vector<std::uint32_t>> cols(static_cast<std::size_t>(p));
  std::vector<int> arities;
  for (auto& col : cols) {
    const int a = std::uniform_int_distribution<int>(2, max_arity)(rng);
    arities.push_back(a);
    std::uniform_int_distribution<std::uint32_t> value(0, static_cast<std::uint32_t>(a - 1));
    for (int i = 0; i < n; ++i) col.push_back(value(rng));
  }
  return make_dataset(cols, arities);
}

Dataset structured_dataset(std::uint64_t seed, int p, int n, int max_arity, double edge_prob) {
  SyntheticSpec spec;
  spec.seed = seed;
  spec.p = p;
  spec.n = n;
  spec.max_arity = max_arity;
  spec.edge_prob = edge_prob;
  return generate_synthetic(spec).data;
}

TempDir::TempDir() {
  static std::atomic<int> counter{0};
  std::random_device rd;
  path_ = std::filesystem::temp_directory_path() /
          ("levelbn-test-" + std::to_string(rd()) + "-" + std::to_string(counter++));
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace levelbn::testing
