#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace levelbn {

/// Splits [0, count) into contiguous blocks, one per worker, and runs
/// body(begin, end, worker) on each. Returns after every block finishes (a
/// barrier). The first exception thrown by any worker is rethrown.
template <typename Body>
void parallel_blocks(std::uint64_t count, int workers, Body&& body) {
  const auto n_workers = static_cast<std::uint64_t>(std::max(1, workers));
  const std::uint64_t used = std::min<std::uint64_t>(n_workers, std::max<std::uint64_t>(count, 1));
  if (used <= 1) {
    body(std::uint64_t{0}, count, 0);
    return;
  }
  std::vector<std::exception_ptr> errors(used);
  {
    std::vector<std::jthread> threads;
    threads.reserve(used);
    const std::uint64_t chunk = count / used;
    const std::uint64_t extra = count % used;
    std::uint64_t begin = 0;
    for (std::uint64_t w = 0; w < used; ++w) {
      const std::uint64_t end = begin + chunk + (w < extra ? 1 : 0);
      threads.emplace_back([&, begin, end, w] {
        try {
          body(begin, end, static_cast<int>(w));
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
      begin = end;
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace levelbn
