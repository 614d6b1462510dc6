#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "levelbn/subset_index.hpp"

namespace levelbn {

struct VariableMeta {
  std::string name;
  /// Number of values the variable takes; codes lie in [0, arity).
  int arity = 1;
  /// Original token for each code (labels.size() == arity).
  std::vector<std::string> labels;
};

/// Complete discrete data: n rows over p <= 30 categorical variables, stored
/// column-major. Immutable after construction.
class Dataset {
 public:
  Dataset() = default;
  /// columns[j][i] is the code of variable j in row i. Validates every
  /// invariant (uniform column length, codes below arity, unique names).
  Dataset(std::vector<VariableMeta> meta, std::vector<std::vector<std::uint32_t>> columns);

  int n() const noexcept { return n_; }
  int p() const noexcept { return static_cast<int>(meta_.size()); }

  const VariableMeta& variable(int j) const { return meta_.at(static_cast<std::size_t>(j)); }
  std::span<const VariableMeta> variables() const noexcept { return meta_; }
  int arity(int j) const { return variable(j).arity; }
  std::vector<std::string> names() const;

  std::span<const std::uint32_t> column(int j) const noexcept {
    return {cells_.data() + static_cast<std::size_t>(j) * static_cast<std::size_t>(n_),
            static_cast<std::size_t>(n_)};
  }
  std::uint32_t cell(int row, int col) const noexcept { return column(col)[static_cast<std::size_t>(row)]; }

  std::optional<int> index_of(std::string_view name) const;

  /// New dataset restricted to the given columns, in the given order.
  Dataset select(std::span<const int> columns) const;
  /// New dataset whose row i is this dataset's row perm[i].
  Dataset permute_rows(std::span<const std::size_t> perm) const;

  /// 64-bit FNV-1a digest over names, arities and cells.
  std::uint64_t fingerprint() const;

 private:
  int n_ = 0;
  std::vector<VariableMeta> meta_;
  std::vector<std::uint32_t> cells_;
};

/// Occurrence counts of every joint configuration of a subset.
struct ContingencyCounts {
  VarSet subset;
  /// Product of member arities (size of the joint value space).
  double sigma = 1.0;
  /// True when codes are the mixed-radix encoding over members in ascending
  /// variable order, first member least significant. False only when the joint
  /// space does not fit in 64 bits; codes are then dense row-class ids.
  bool mixed_radix = true;
  /// (code, count) for every configuration that occurs, ascending by code.
  std::vector<std::pair<std::uint64_t, std::uint64_t>> entries;

  std::uint64_t total() const noexcept;
  std::uint64_t count(std::uint64_t code) const noexcept;
};

/// Reusable scratch space for counting joint configurations. One per worker.
class CountingWorkspace {
 public:
  /// Joint spaces up to this size are counted in a dense array.
  static constexpr std::uint64_t kDenseLimit = std::uint64_t{1} << 20;

  /// Calls f(code, count) once per occurring configuration of s, in order of
  /// first occurrence. Returns sigma.
  template <typename F>
  double for_each_count(const Dataset& d, VarSet s, F&& f);

  /// Whether the codes produced by the last call are mixed-radix codes.
  bool last_mixed_radix() const noexcept { return mixed_radix_; }

 private:
  double encode(const Dataset& d, VarSet s);
  void compact();

  std::vector<std::uint64_t> codes_;
  std::vector<std::uint64_t> sorted_;
  std::vector<std::uint32_t> dense_;
  std::uint64_t code_space_ = 1;
  bool mixed_radix_ = true;
};

template <typename F>
double CountingWorkspace::for_each_count(const Dataset& d, VarSet s, F&& f) {
  const double sigma = encode(d, s);
  if (code_space_ <= kDenseLimit) {
    if (dense_.size() < code_space_) dense_.resize(code_space_, 0);
    for (std::uint64_t c : codes_) ++dense_[c];
    // Second pass reports each code at its first row and clears it.
    for (std::uint64_t c : codes_) {
      if (const std::uint32_t k = dense_[c]) {
        f(c, static_cast<std::uint64_t>(k));
        dense_[c] = 0;
      }
    }
  } else {
    // Sort-and-count; reported in first-occurrence order like the dense path.
    sorted_.resize(codes_.size());
    for (std::size_t i = 0; i < codes_.size(); ++i) sorted_[i] = i;
    std::sort(sorted_.begin(), sorted_.end(), [&](std::uint64_t a, std::uint64_t b) {
      return codes_[a] != codes_[b] ? codes_[a] < codes_[b] : a < b;
    });
    std::vector<std::pair<std::uint64_t, std::uint64_t>> groups;  // (first row, count)
    for (std::size_t i = 0; i < sorted_.size();) {
      std::size_t j = i + 1;
      while (j < sorted_.size() && codes_[sorted_[j]] == codes_[sorted_[i]]) ++j;
      groups.emplace_back(sorted_[i], j - i);
      i = j;
    }
    std::sort(groups.begin(), groups.end());
    for (const auto& [row, count] : groups) f(codes_[row], count);
  }
  return sigma;
}

/// Counts each joint configuration of s over all rows. s must be nonempty
/// with members below d.p().
ContingencyCounts count_configurations(const Dataset& d, VarSet s);

struct LoadOptions {
  /// Declared arities by variable name; take precedence over the sidecar file.
  std::map<std::string, int> declared_arities;
  /// Keep only these columns (by header name), in this order.
  std::vector<std::string> columns;
  /// Keep only the first N columns (0 = all). Ignored when columns is set.
  int first_columns = 0;
  /// Read "<stem>.meta.json" next to the CSV when present.
  bool use_sidecar = true;
};

/// Reads a comma-separated file whose first row names the variables. Cells are
/// integer codes or category strings. Throws IngestError on ragged rows, empty
/// input, missing cells, or a declared arity below an observed code.
Dataset load_csv(const std::filesystem::path& path, const LoadOptions& options = {});

/// Parses CSV text directly (same rules as load_csv, no sidecar).
Dataset parse_csv(std::string_view text, const LoadOptions& options = {});

/// Location of the arity sidecar for a CSV path: same directory and stem,
/// extension ".meta.json".
std::filesystem::path sidecar_path(const std::filesystem::path& csv_path);

/// Writes the dataset as CSV using its labels.
void write_csv(const Dataset& d, const std::filesystem::path& path);
/// Writes {"name": arity, ...} as the sidecar for path.
void write_sidecar(const Dataset& d, const std::filesystem::path& csv_path);

struct SyntheticSpec {
  std::uint64_t seed = 1;
  int p = 5;
  int n = 200;
  int max_arity = 2;
  double edge_prob = 0.5;
};

struct TrueDag {
  /// Topological order used for sampling.
  std::vector<int> order;
  std::vector<VarSet> parents;

  int edge_count() const;
};

struct SyntheticData {
  Dataset data;
  TrueDag dag;
};

/// Random DAG (edge between order positions i < j with probability
/// edge_prob), Dirichlet(1,...,1) conditional tables, then n ancestral samples.
/// Deterministic for a fixed spec. Variables are named V0..V{p-1} and keep
/// their drawn arity even if some value never appears.
SyntheticData generate_synthetic(const SyntheticSpec& spec);

}  // namespace levelbn
