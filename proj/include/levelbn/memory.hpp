#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "levelbn/network.hpp"
#include "levelbn/subset_index.hpp"

namespace levelbn {

/// Counts DP array slots as they are allocated and freed, remembering the
/// high-water mark. Allocation happens on the orchestrating thread only.
class EntryTracker {
 public:
  void acquire(std::uint64_t entries, std::uint64_t bytes) noexcept {
    live_entries_ += entries;
    live_bytes_ += bytes;
    if (live_entries_ > peak_entries_) peak_entries_ = live_entries_;
    if (live_bytes_ > peak_bytes_) peak_bytes_ = live_bytes_;
  }
  void release(std::uint64_t entries, std::uint64_t bytes) noexcept {
    live_entries_ -= entries;
    live_bytes_ -= bytes;
  }

  std::uint64_t live_entries() const noexcept { return live_entries_; }
  std::uint64_t live_bytes() const noexcept { return live_bytes_; }
  std::uint64_t peak_entries() const noexcept { return peak_entries_; }
  std::uint64_t peak_bytes() const noexcept { return peak_bytes_; }

 private:
  std::uint64_t live_entries_ = 0;
  std::uint64_t live_bytes_ = 0;
  std::uint64_t peak_entries_ = 0;
  std::uint64_t peak_bytes_ = 0;
};

/// Fixed-size array whose lifetime is reported to an EntryTracker.
template <typename T>
class TrackedArray {
 public:
  TrackedArray() = default;
  TrackedArray(EntryTracker& tracker, std::size_t size, T init = T{}) : tracker_(&tracker), data_(size, init) {
    tracker_->acquire(size, size * sizeof(T));
  }
  TrackedArray(const TrackedArray&) = delete;
  TrackedArray& operator=(const TrackedArray&) = delete;
  TrackedArray(TrackedArray&& o) noexcept : tracker_(std::exchange(o.tracker_, nullptr)), data_(std::move(o.data_)) {}
  TrackedArray& operator=(TrackedArray&& o) noexcept {
    if (this != &o) {
      reset();
      tracker_ = std::exchange(o.tracker_, nullptr);
      data_ = std::move(o.data_);
    }
    return *this;
  }
  ~TrackedArray() { reset(); }

  void reset() noexcept {
    if (tracker_ != nullptr) tracker_->release(data_.size(), data_.size() * sizeof(T));
    tracker_ = nullptr;
    data_.clear();
    data_.shrink_to_fit();
  }

  std::size_t size() const noexcept { return data_.size(); }
  T& operator[](std::size_t i) noexcept { return data_[i]; }
  const T& operator[](std::size_t i) const noexcept { return data_[i]; }
  T* data() noexcept { return data_.data(); }
  const T* data() const noexcept { return data_.data(); }
  std::span<T> span() noexcept { return data_; }
  std::span<const T> span() const noexcept { return data_; }

 private:
  EntryTracker* tracker_ = nullptr;
  std::vector<T> data_;
};

/// Byte size of one stored entry of each DP array.
struct EntryBytes {
  static constexpr std::uint64_t kScore = sizeof(double);     // q, r, parent scores
  static constexpr std::uint64_t kParentSet = sizeof(VarSet);  // parent-set bitmask
  static constexpr std::uint64_t kSink = sizeof(std::uint8_t);
};

struct LevelAccount {
  int k = 0;
  std::uint64_t combinations = 0;  // C(p,k)
  std::uint64_t entries = 0;       // C(p,k) * (2 + 2k)
  std::uint64_t bytes = 0;
  /// k * C(p,k) = p * C(p-1,k-1) best-parent scores, one per (subset, member).
  std::uint64_t parent_score_entries = 0;
  std::uint64_t parent_score_bytes = 0;
  /// Tracked entries live while this level is being filled (itself, the level
  /// below it and the sink table).
  std::uint64_t live_entries = 0;
};

/// Closed-form memory prediction for one algorithm at p variables.
struct AccountingReport {
  int p = 0;
  std::uint64_t peak_entries = 0;
  std::uint64_t peak_bytes = 0;
  /// Level being filled when the entry peak is reached.
  int peak_level = 0;
  /// Best-parent score entries at their own peak (per-member rows).
  std::uint64_t peak_parent_score_entries = 0;
  std::uint64_t sink_entries = 0;
  std::uint64_t sink_bytes = 0;
  /// Per-level breakdown (k = 0..p); empty for the baseline.
  std::vector<LevelAccount> levels;
  /// Baseline only: the full-table components.
  std::uint64_t parent_score_entries = 0;
  std::uint64_t parent_set_entries = 0;
  std::uint64_t subset_score_entries = 0;
};

/// Level-wise DP: max over k of two adjacent level buffers, plus the sink
/// table (2^p sink ids, and 2^p sink parent sets under kSinkParents).
/// Pure arithmetic for any p <= 30.
AccountingReport estimate_peak_entries(int p, ParentRecovery mode = ParentRecovery::kSinkParents);

/// Full-table DP: p*2^(p-1) parent scores + p*2^(p-1) parent sets + 2*2^p
/// subset scores (Q and R) + 2^p sinks, all resident together.
AccountingReport baseline_peak_entries(int p);

}  // namespace levelbn
