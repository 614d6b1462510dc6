#pragma once

#include <array>
#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <iterator>
#include <span>
#include <string>

namespace levelbn {

/// Hard cap on the number of variables: masks fit one 32-bit word and every
/// binomial coefficient fits 64 bits exactly.
inline constexpr int kMaxVariables = 30;

using Rank = std::uint64_t;

/// Member list of a VarSet in ascending order, stored inline.
struct Members {
  std::array<std::uint8_t, kMaxVariables> ids{};
  int count = 0;

  const std::uint8_t* begin() const noexcept { return ids.data(); }
  const std::uint8_t* end() const noexcept { return ids.data() + count; }
  int size() const noexcept { return count; }
  int operator[](int i) const noexcept { return ids[static_cast<std::size_t>(i)]; }
};

/// A subset of variables {0..p-1} encoded as a bitmask.
class VarSet {
 public:
  constexpr VarSet() noexcept = default;
  constexpr explicit VarSet(std::uint32_t mask) noexcept : mask_(mask) {}

  static constexpr VarSet singleton(int v) noexcept { return VarSet(std::uint32_t{1} << v); }
  static constexpr VarSet full(int p) noexcept {
    return VarSet(p >= 32 ? ~std::uint32_t{0} : (std::uint32_t{1} << p) - 1U);
  }
  static constexpr VarSet of(std::initializer_list<int> vars) noexcept {
    std::uint32_t m = 0;
    for (int v : vars) m |= std::uint32_t{1} << v;
    return VarSet(m);
  }

  constexpr std::uint32_t mask() const noexcept { return mask_; }
  constexpr int size() const noexcept { return std::popcount(mask_); }
  constexpr bool empty() const noexcept { return mask_ == 0; }
  constexpr bool contains(int v) const noexcept { return (mask_ >> v) & 1U; }
  constexpr bool is_subset_of(VarSet other) const noexcept { return (mask_ & ~other.mask_) == 0; }
  constexpr int lowest() const noexcept { return std::countr_zero(mask_); }
  constexpr int highest() const noexcept { return 31 - std::countl_zero(mask_); }

  constexpr VarSet with(int v) const noexcept { return VarSet(mask_ | (std::uint32_t{1} << v)); }
  constexpr VarSet without(int v) const noexcept { return VarSet(mask_ & ~(std::uint32_t{1} << v)); }

  constexpr VarSet operator|(VarSet o) const noexcept { return VarSet(mask_ | o.mask_); }
  constexpr VarSet operator&(VarSet o) const noexcept { return VarSet(mask_ & o.mask_); }
  constexpr VarSet operator-(VarSet o) const noexcept { return VarSet(mask_ & ~o.mask_); }

  constexpr auto operator<=>(const VarSet&) const noexcept = default;

  Members members() const noexcept {
    Members out;
    for (std::uint32_t m = mask_; m != 0; m &= m - 1) {
      out.ids[static_cast<std::size_t>(out.count++)] = static_cast<std::uint8_t>(std::countr_zero(m));
    }
    return out;
  }

  template <typename F>
  void for_each(F&& f) const {
    for (std::uint32_t m = mask_; m != 0; m &= m - 1) f(std::countr_zero(m));
  }

  /// "{0,2,5}"
  std::string to_string() const;

 private:
  std::uint32_t mask_ = 0;
};

namespace detail {

struct BinomialTable {
  std::array<std::array<std::uint64_t, kMaxVariables + 1>, kMaxVariables + 1> c{};

  constexpr BinomialTable() {
    for (int n = 0; n <= kMaxVariables; ++n) {
      c[n][0] = 1;
      for (int k = 1; k <= n; ++k) c[n][k] = c[n - 1][k - 1] + (k < n ? c[n - 1][k] : 0);
    }
  }
};

inline constexpr BinomialTable kBinomials{};

/// C(n,k) with the combinatorial convention C(n,k) = 0 for k > n; unchecked.
constexpr std::uint64_t choose(int n, int k) noexcept {
  return k > n ? 0 : kBinomials.c[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)];
}

}  // namespace detail

/// Exact C(n,k) for 0 <= k <= n <= 30. Throws ParameterError otherwise.
std::uint64_t binom(int n, int k);

/// Colexicographic rank of s among all |s|-subsets: sum_j C(e_j, j+1) over the
/// ascending members e_0 < e_1 < ... . The empty set has rank 0.
constexpr Rank rank(VarSet s) noexcept {
  Rank r = 0;
  int j = 1;
  for (std::uint32_t m = s.mask(); m != 0; m &= m - 1, ++j) r += detail::choose(std::countr_zero(m), j);
  return r;
}

/// The idx-th k-subset of {0..p-1} in colex order. Throws ParameterError if
/// idx >= C(p,k) or k is outside [0,p].
VarSet unrank(int p, int k, Rank idx);

/// rank(s \ {x}) without building the reduced set. Throws if x is not in s.
Rank sub_rank(VarSet s, int x);

/// out[t] = rank(s \ {t-th smallest member of s}) for every member, in O(|s|).
/// out must hold at least |s| slots.
void sub_ranks(VarSet s, std::span<Rank> out) noexcept;

/// Smallest k-subset greater than s in colex order (Gosper's successor).
constexpr VarSet next_in_level(VarSet s) noexcept {
  const std::uint32_t v = s.mask();
  const std::uint32_t t = v | (v - 1);
  return VarSet((t + 1) | (((~t & (t + 1)) - 1) >> (std::countr_zero(v) + 1)));
}

/// Forward range over the k-subsets of {0..p-1} whose colex ranks lie in
/// [first, last), in strictly increasing rank order. Independent ranges over
/// disjoint rank blocks can be walked concurrently.
class LevelRange {
 public:
  class iterator {
   public:
    using iterator_category = std::input_iterator_tag;
    using value_type = VarSet;
    using difference_type = std::ptrdiff_t;

    iterator() = default;
    iterator(VarSet current, Rank remaining) : current_(current), remaining_(remaining) {}

    VarSet operator*() const noexcept { return current_; }
    iterator& operator++() noexcept {
      if (--remaining_ != 0) current_ = next_in_level(current_);
      return *this;
    }
    void operator++(int) noexcept { ++*this; }
    bool operator==(const iterator& o) const noexcept { return remaining_ == o.remaining_; }

   private:
    VarSet current_;
    Rank remaining_ = 0;
  };

  LevelRange(int p, int k);
  LevelRange(int p, int k, Rank first, Rank last);

  iterator begin() const;
  iterator end() const { return iterator(VarSet{}, 0); }
  Rank size() const noexcept { return last_ - first_; }
  Rank first_rank() const noexcept { return first_; }

 private:
  int p_;
  int k_;
  Rank first_;
  Rank last_;
};

/// All C(p,k) k-subsets in increasing colex order.
inline LevelRange enumerate_level(int p, int k) { return LevelRange(p, k); }

}  // namespace levelbn
