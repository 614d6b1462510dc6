#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "levelbn/dataset.hpp"

namespace levelbn::testing {

/// Two binary variables X, Y over five rows: x = 0,1,0,1,1 and y = 0,0,1,1,1.
Dataset golden_dataset();

/// Independent uniform codes; arities drawn uniformly from [2, max_arity].
Dataset random_dataset(std::uint64_t seed, int p, int n, int max_arity);

/// Synthetic data from a random network (structured, so optima are not flat).
Dataset structured_dataset(std::uint64_t seed, int p, int n, int max_arity = 3, double edge_prob = 0.5);

/// Builds a dataset from integer columns with the given arities.
Dataset make_dataset(const std::vector<std::vector<std::uint32_t>>& columns, const std::vector<int>& arities);

/// Fresh empty directory under the system temp dir; removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const noexcept { return path_; }
  std::filesystem::path file(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

}  // namespace levelbn::testing
