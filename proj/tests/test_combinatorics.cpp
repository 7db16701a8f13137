#include "doctest.h"

#include <set>

#include "bnmc/combinatorics.hpp"
#include "support/oracles.hpp"

using namespace bnmc;

TEST_CASE("binomial against a fresh Pascal triangle") {
  CHECK(binomial(6, 4) == 15);
  CHECK(binomial(59, 4) == 455126);
  CHECK(binomial(5, 0) == 1);
  CHECK(binomial(3, 7) == 0);  // k > n
  for (int n = 0; n <= 64; ++n)
    for (int k = 0; k <= n; ++k) CHECK(binomial(n, k) == oracle::binomial(n, k));
}

TEST_CASE("unrank examples") {
  CHECK(unrank_combination(5, 2, 1) == Combination{{1, 2}});
  CHECK(unrank_combination(5, 2, 5) == Combination{{2, 3}});
  // worked example: second size-4 subset of six candidates, 1-based
  CHECK(unrank_combination(6, 4, 2) == Combination{{1, 2, 3, 5}});
  CHECK(unrank_combination(4, 0, 1) == Combination{});
  CHECK_THROWS_AS(unrank_combination(5, 2, 11), std::out_of_range);
  CHECK_THROWS_AS(unrank_combination(5, 2, 0), std::out_of_range);
}

TEST_CASE("unrank terminates and is exact at the last rank") {
  for (int n = 1; n <= 10; ++n)
    for (int k = 0; k <= std::min(n, 4); ++k) {
      const Combination last = unrank_combination(n, k, binomial(n, k));
      Combination expect;
      for (int e = n - k + 1; e <= n; ++e) expect.elems.push_back(e);
      CHECK(last == expect);
    }
}

TEST_CASE("rank examples") {
  CHECK(rank_combination(Combination{{1, 2}}, 5) == 1);
  CHECK(rank_combination(Combination{{2, 3}}, 5) == 5);
  CHECK(rank_combination(Combination{{1, 2, 3, 5}}, 6) == 2);
}

TEST_CASE("exhaustive rank/unrank round trip and lexicographic agreement") {
  for (int n = 0; n <= 12; ++n) {
    for (int k = 0; k <= std::min(n, 4); ++k) {
      const auto naive = oracle::lex_combinations(n, k);
      REQUIRE(naive.size() == binomial(n, k));
      for (std::uint64_t l = 1; l <= naive.size(); ++l) {
        const Combination c = unrank_combination(n, k, l);
        CHECK(c.elems == naive[l - 1]);
        CHECK(rank_combination(c, n) == l);
      }
    }
  }
}

TEST_CASE("global_index worked values") {
  const int n = 6, s = 4;
  CHECK(bounded_subset_count(n, s) == 57);
  CHECK(global_index(ParentSet::of({0, 1, 2, 3}), n, s) == 0);
  CHECK(global_index(ParentSet::of({0, 1, 2, 4}), n, s) == 1);
  CHECK(global_index(ParentSet::of({0, 1, 2, 5}), n, s) == 2);
  CHECK(global_index(ParentSet::of({0, 1, 3, 4}), n, s) == 3);
  CHECK(global_index(ParentSet::of({5}), n, s) == 55);
  CHECK(global_index(ParentSet{}, n, s) == 56);
}

TEST_CASE("global_index is a bijection matched by subset_at and enumeration") {
  for (int n = 0; n <= 12; ++n) {
    const int s = 4;
    const std::uint64_t total = bounded_subset_count(n, s);
    std::set<std::uint64_t> seen;
    std::uint64_t at = 0;
    enumerate_bounded_position_sets(n, s, [&](ParentSet p) {
      const std::uint64_t g = global_index(p, n, s);
      CHECK(g == at);                      // enumeration follows the ordering
      CHECK(subset_at(g, n, s) == p);      // inverse agrees
      seen.insert(g);
      ++at;
    });
    CHECK(at == total);  // exact count
    CHECK(seen.size() == total);
    CHECK(*seen.begin() == 0);
    CHECK(*seen.rbegin() == total - 1);
  }
}

TEST_CASE("enumerate_bounded_subsets counts") {
  int count = 0;
  enumerate_bounded_subsets(std::vector<int>{}, 4,
                            [&](ParentSet p) {
                              ++count;
                              CHECK(p.empty());
                            });
  CHECK(count == 1);  // empty candidate pool

  count = 0;
  const std::vector<int> six{0, 1, 2, 3, 4, 5};
  enumerate_bounded_subsets(six, 4, [&](ParentSet) { ++count; });
  CHECK(count == 57);

  count = 0;
  std::vector<int> fifteen(15);
  for (int i = 0; i < 15; ++i) fifteen[i] = i;
  enumerate_bounded_subsets(fifteen, 4, [&](ParentSet) { ++count; });
  std::uint64_t expect = 0;
  for (int j = 0; j <= 4; ++j) expect += oracle::binomial(15, j);
  CHECK(count == 1941);
  CHECK(expect == 1941);
}

TEST_CASE("enumeration maps candidate positions to node labels") {
  const std::vector<int> candidates{7, 3, 9};
  std::vector<ParentSet> seen;
  enumerate_bounded_subsets(candidates, 1,
                            [&](ParentSet p) { seen.push_back(p); });
  REQUIRE(seen.size() == 4);
  CHECK(seen[0] == ParentSet::of({7}));
  CHECK(seen[1] == ParentSet::of({3}));
  CHECK(seen[2] == ParentSet::of({9}));
  CHECK(seen[3] == ParentSet{});
}

TEST_CASE("build_pst") {
  const ParentSetTable t = build_pst(6, 4);
  REQUIRE(t.size() == 57);
  CHECK(t.masks[0] == ParentSet::of({0, 1, 2, 3}).mask);
  CHECK(t.masks[1] == ParentSet::of({0, 1, 2, 4}).mask);
  CHECK(t.masks[55] == ParentSet::of({5}).mask);
  CHECK(t.masks[56] == 0);

  const ParentSetTable tiny = build_pst(1, 4);
  REQUIRE(tiny.size() == 2);
  CHECK(tiny.masks[0] == 1);
  CHECK(tiny.masks[1] == 0);

  // 60 candidates at 16 bytes per row is just under 8 MB.
  const double mb = double(pst_bytes_upper_bound(60, 4)) / (1024.0 * 1024.0);
  CHECK(mb == doctest::Approx(7.99).epsilon(0.001));
}
