#include "bnmc/combinatorics.hpp"

#include <stdexcept>
#include <string>

namespace bnmc {

Combination unrank_combination(int n, int k, std::uint64_t l) {
  if (n < 0 || k < 0 || k > n)
    throw std::out_of_range("unrank_combination: need 0 <= k <= n");
  if (l < 1 || l > binomial(n, k))
    throw std::out_of_range("unrank_combination: rank " + std::to_string(l) +
                            " outside [1, C(" + std::to_string(n) + "," +
                            std::to_string(k) + ")]");
  const int total = k;
  Combination c;
  c.elems.resize(total);
  int low = 0;
  for (int pos = 0; pos + 1 < total; ++pos) {
    // Accumulate C(n-shift, k-1) blocks until the one containing l; the
    // break condition bounds the loop for every valid rank.
    std::uint64_t sum = 0;
    int shift = 1;
    for (; shift <= n; ++shift) {
      const std::uint64_t block = binomial(n - shift, k - 1);
      if (sum + block < l)
        sum += block;
      else
        break;
    }
    c.elems[pos] = low + shift;
    n -= shift;
    k -= 1;
    l -= sum;
    low = c.elems[pos];
  }
  if (total > 0) c.elems[total - 1] = low + static_cast<int>(l);
  return c;
}

std::uint64_t rank_combination(const Combination& c, int n) {
  const int k = c.k();
  int prev = 0;
  for (int e : c.elems) {
    if (e <= prev || e > n)
      throw std::out_of_range("rank_combination: combination invalid over n");
    prev = e;
  }
  // 0-based rank as a telescoped combinatorial number system sum:
  // sum over positions of C(n - a_{pos-1}, k-pos+1) - C(n - a_pos + 1, k-pos+1).
  std::uint64_t rank = 0;
  prev = 0;
  for (int pos = 1; pos <= k; ++pos) {
    const int a = c.elems[pos - 1];
    rank += binomial(n - prev, k - pos + 1) - binomial(n - a + 1, k - pos + 1);
    prev = a;
  }
  return rank + 1;
}

std::uint64_t global_index(ParentSet pset, int candidates, int s) {
  const int k = pset.size();
  std::uint64_t offset = 0;
  for (int j = k + 1; j <= s; ++j) offset += binomial(candidates, j);
  // 0-based lexicographic rank of the mask, same telescoped sum as
  // rank_combination but walking mask bits directly (1-based elements).
  std::uint64_t rank = 0;
  int prev = 0, pos = 1;
  for (std::uint64_t m = pset.mask; m != 0; m &= m - 1, ++pos) {
    const int a = std::countr_zero(m) + 1;
    rank += binomial(candidates - prev, k - pos + 1) -
            binomial(candidates - a + 1, k - pos + 1);
    prev = a;
  }
  return offset + rank;
}

ParentSet subset_at(std::uint64_t index, int candidates, int s) {
  for (int k = std::min(s, candidates); k >= 0; --k) {
    const std::uint64_t block = binomial(candidates, k);
    if (index < block) {
      Combination c = unrank_combination(candidates, k, index + 1);
      ParentSet p;
      for (int e : c.elems) p.add(e - 1);
      return p;
    }
    index -= block;
  }
  throw std::out_of_range("subset_at: index outside [0, S)");
}

ParentSetTable build_pst(int candidates, int s) {
  ParentSetTable t;
  t.candidates = candidates;
  t.s = s;
  t.masks.reserve(bounded_subset_count(candidates, s));
  enumerate_bounded_position_sets(candidates, s, [&](ParentSet p) {
    t.masks.push_back(p.mask);
  });
  return t;
}

}  // namespace bnmc
