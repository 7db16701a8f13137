#ifndef BNMC_COMBINATORICS_HPP
#define BNMC_COMBINATORICS_HPP

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "bnmc/types.hpp"

namespace bnmc {

namespace detail {
constexpr auto make_pascal_table() {
  // C(n,k) for n,k <= 64; the largest, C(64,32), still fits in 64 bits.
  std::array<std::array<std::uint64_t, kMaxNodes + 1>, kMaxNodes + 1> t{};
  for (int n = 0; n <= kMaxNodes; ++n) {
    t[n][0] = 1;
    for (int k = 1; k <= n; ++k) t[n][k] = t[n - 1][k - 1] + t[n - 1][k];
  }
  return t;
}
inline constexpr auto kPascal = make_pascal_table();
}  // namespace detail

// Exact binomial coefficient; 0 when k > n. Requires 0 <= n <= 64.
constexpr std::uint64_t binomial(int n, int k) {
  return (k < 0 || k > n) ? 0 : detail::kPascal[n][k];
}

// Number of subsets of an n-element set with size <= s.
constexpr std::uint64_t bounded_subset_count(int n, int s) {
  std::uint64_t total = 0;
  for (int j = 0; j <= s; ++j) total += binomial(n, j);
  return total;
}

// A k-combination over {1..n}: strictly increasing 1-based elements.
// Ranks are 1-based as well; conversion to 0-based node indices happens at
// the call boundary.
struct Combination {
  std::vector<int> elems;

  int k() const { return static_cast<int>(elems.size()); }
  friend bool operator==(const Combination& a, const Combination& b) {
    return a.elems == b.elems;
  }
};

// The l-th k-combination of {1..n} in lexicographic order, computed by the
// non-recursive shift-and-reduce loop (no enumeration). Throws
// std::out_of_range unless 1 <= l <= C(n,k).
Combination unrank_combination(int n, int k, std::uint64_t l);

// Inverse of unrank_combination: the 1-based lexicographic rank of c among
// the k-combinations of {1..n}. Combinatorial number system sum.
std::uint64_t rank_combination(const Combination& c, int n);

// ---- global subset ordering ----
// All subsets of {0..candidates-1} with size <= s are ordered by descending
// size, lexicographically within each size; indices are 0-based and dense:
// index 0 is the lexicographically first size-s subset, index S-1 is the
// empty set, S = bounded_subset_count(candidates, s). This ordering is the
// cache-addressing contract and must not change.

// Position of pset (a bitmask over {0..candidates-1}) in the global ordering.
std::uint64_t global_index(ParentSet pset, int candidates, int s);

// Inverse of global_index. Requires index < bounded_subset_count.
ParentSet subset_at(std::uint64_t index, int candidates, int s);

// Maps a position mask through a candidate list to a node-index mask.
inline ParentSet apply_candidates(std::uint64_t position_mask,
                                  std::span<const int> candidates) {
  ParentSet out;
  for (std::uint64_t m = position_mask; m != 0; m &= m - 1)
    out.add(candidates[std::countr_zero(m)]);
  return out;
}

// Calls f(ParentSet position_mask) for every subset of {0..candidates-1}
// with size <= s, in global_index order. Never materializes larger subsets.
template <class F>
void enumerate_bounded_position_sets(int candidates, int s, F&& f) {
  for (int k = std::min(s, candidates); k >= 1; --k) {
    // Lexicographic walk over k-subsets via the standard successor rule.
    std::vector<int> a(k);
    for (int i = 0; i < k; ++i) a[i] = i;
    for (;;) {
      ParentSet p;
      for (int i = 0; i < k; ++i) p.add(a[i]);
      f(p);
      int i = k - 1;
      while (i >= 0 && a[i] == candidates - k + i) --i;
      if (i < 0) break;
      ++a[i];
      for (int j = i + 1; j < k; ++j) a[j] = a[j - 1] + 1;
    }
  }
  f(ParentSet{});
}

// Same walk, yielding node-index masks relative to a candidate list.
template <class F>
void enumerate_bounded_subsets(std::span<const int> candidates, int s, F&& f) {
  enumerate_bounded_position_sets(static_cast<int>(candidates.size()), s,
                                  [&](ParentSet positions) {
                                    f(apply_candidates(positions.mask,
                                                       candidates));
                                  });
}

// Parent set table: every bounded subset materialized in global_index order,
// as position masks. Row i is subset_at(i).
struct ParentSetTable {
  int candidates = 0;
  int s = 0;
  std::vector<std::uint64_t> masks;

  std::uint64_t size() const { return masks.size(); }
};

ParentSetTable build_pst(int candidates, int s);

// Upper bound on PST storage at 16 bytes per row.
constexpr std::uint64_t pst_bytes_upper_bound(int candidates, int s) {
  return bounded_subset_count(candidates, s) * 16;
}

}  // namespace bnmc

#endif
