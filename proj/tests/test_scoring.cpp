#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <vector>

#include "bnmc/evalgen.hpp"
#include "bnmc/rng.hpp"
#include "bnmc/scoring.hpp"
#include "support/oracles.hpp"

using namespace bnmc;

namespace {
Dataset random_binary_dataset(int n, std::size_t rows, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::uint8_t> cells(rows * n);
  for (auto& c : cells) c = static_cast<std::uint8_t>(rng.next_below(2));
  return Dataset(std::vector<int>(n, 2), std::move(cells));
}

RunConfig basic_config(int s = 4) {
  RunConfig cfg;
  cfg.max_parents = s;
  cfg.gamma = 0.1;
  cfg.ess = 1.0;
  return cfg;
}
}  // namespace

TEST_CASE("count_statistics") {
  SUBCASE("empty dataset") {
    const Dataset d({2, 2}, {});
    const CountTable t = count_statistics(d, 0, ParentSet::of({1}));
    CHECK(t.configs() == 2);
    CHECK(t.samples() == 0);
    CHECK(t.nk(0) == 0);
    CHECK(t.nk(1) == 0);
  }

  SUBCASE("no parents is a plain frequency count") {
    const Dataset d({2}, {0, 1, 1});
    const CountTable t = count_statistics(d, 0, ParentSet{});
    CHECK(t.configs() == 1);
    CHECK(t.njk(0, 0) == 1);
    CHECK(t.njk(0, 1) == 2);
    CHECK(t.nk(0) == 3);
  }

  SUBCASE("XOR child over two binary parents") {
    // rows (v0,v1,v2) with v2 = v0 xor v1, each parent config once
    const Dataset d({2, 2, 2}, {0, 0, 0, 0, 1, 1, 1, 0, 1, 1, 1, 0});
    const CountTable t = count_statistics(d, 2, ParentSet::of({0, 1}));
    CHECK(t.configs() == 4);
    for (std::uint64_t k = 0; k < 4; ++k) {
      CHECK(t.nk(k) == 1);
      const int v0 = static_cast<int>(k & 1), v1 = static_cast<int>(k >> 1);
      CHECK(t.njk(k, v0 ^ v1) == 1);
      CHECK(t.njk(k, 1 - (v0 ^ v1)) == 0);
    }
  }

  SUBCASE("node in its own parent set is rejected") {
    const Dataset d({2, 2}, {0, 0});
    CHECK_THROWS_AS(count_statistics(d, 0, ParentSet::of({0})), DataError);
  }
}

TEST_CASE("local_score closed forms") {
  const Hyperparams hp{1.0, 1.0, AlphaMode::kBdeu};  // gamma = 1, ess = 1

  SUBCASE("no data: gamma term only") {
    const Dataset d({2, 2, 2}, {});
    const Hyperparams penal{0.1, 1.0, AlphaMode::kBdeu};
    CHECK(local_score(0, ParentSet{}, d, penal) == 0.0);
    CHECK(local_score(0, ParentSet::of({1, 2}), d, penal) ==
          doctest::Approx(2.0 * std::log10(0.1)).epsilon(1e-14));
  }

  SUBCASE("two-row binary hand case: log10(1/8)") {
    const Dataset d({2}, {0, 1});
    CHECK(local_score(0, ParentSet{}, d, hp) ==
          doctest::Approx(std::log10(1.0 / 8.0)).epsilon(1e-12));
  }

  SUBCASE("three-row binary hand case: log10(1/16)") {
    // G(1)/G(4) * G(1.5)G(2.5)/G(0.5)^2 = (1/6) * (1/2)(3/8 * 2) ... = 1/16
    const Dataset d({2}, {0, 1, 1});
    CHECK(local_score(0, ParentSet{}, d, hp) ==
          doctest::Approx(std::log10(1.0 / 16.0)).epsilon(1e-12));
  }

  SUBCASE("row permutation invariance") {
    Rng rng(99);
    const Dataset d = random_binary_dataset(4, 64, 17);
    std::vector<std::uint8_t> cells(d.cells());
    std::vector<int> rows(64);
    for (int i = 0; i < 64; ++i) rows[i] = i;
    shuffle(rows, rng);
    std::vector<std::uint8_t> shuffled(cells.size());
    for (int i = 0; i < 64; ++i)
      for (int c = 0; c < 4; ++c) shuffled[i * 4 + c] = cells[rows[i] * 4 + c];
    const Dataset d2(d.cardinalities(), std::move(shuffled));
    for (int node = 0; node < 4; ++node) {
      const ParentSet pset{static_cast<std::uint64_t>(
          rng.next_below(16) & ~(std::uint64_t{1} << node))};
      CHECK(local_score(node, pset, d, hp) == local_score(node, pset, d2, hp));
    }
  }

  SUBCASE("K2 mode uses unit hyperparameters") {
    const Dataset d({2}, {0, 1, 1});
    const Hyperparams k2{1.0, 1.0, AlphaMode::kK2};
    // G(2)/G(5) * G(1)G(3)/G(1)^2 = (1/24) * 2 = 1/12
    CHECK(local_score(0, ParentSet{}, d, k2) ==
          doctest::Approx(std::log10(1.0 / 12.0)).epsilon(1e-12));
  }
}

TEST_CASE("ppf") {
  CHECK(ppf(0.5) == 0.0);
  CHECK(ppf(1.0) == 12.5);
  CHECK(ppf(0.0) == -12.5);
  CHECK(ppf(0.2) == doctest::Approx(-2.7).epsilon(1e-12));
  CHECK(ppf(0.7) > 0.0);
  CHECK(ppf(0.3) < 0.0);
  CHECK_THROWS_AS(ppf(1.5), DataError);
  CHECK_THROWS_AS(ppf(-0.1), DataError);
}

TEST_CASE("score cache") {
  const Dataset data = random_binary_dataset(6, 100, 3);

  SUBCASE("entry counts") {
    RunConfig cfg = basic_config(1);
    const ScoreCache c1 = ScoreCache::build(data, cfg);
    CHECK(c1.entries_per_node() == 6);  // empty set plus five singletons

    const ScoreCache c4 = ScoreCache::build(data, basic_config(4));
    CHECK(c4.entries_per_node() == bounded_subset_count(5, 4));
    CHECK(ScoreCache::estimate_bytes(20, 4) == 20ull * 5036 * 8);
  }

  SUBCASE("lookup equals a fresh computation, bit for bit") {
    const RunConfig cfg = basic_config();
    const ScoreCache cache = ScoreCache::build(data, cfg);
    for (int node = 0; node < 6; ++node)
      for (std::uint64_t g = 0; g < cache.entries_per_node(); ++g)
        CHECK(std::isfinite(cache.at(node, g)));
    const Hyperparams hp{cfg.gamma, cfg.ess, cfg.alpha_mode};
    Rng rng(21);
    for (int probe = 0; probe < 1000; ++probe) {
      const int node = static_cast<int>(rng.next_below(6));
      ParentSet pset;
      while (pset.size() < 4) {
        const int v = static_cast<int>(rng.next_below(6));
        if (v != node && rng.next_unit() < 0.5) pset.add(v);
        if (rng.next_unit() < 0.4) break;
      }
      CHECK(cache.lookup(node, pset) == local_score(node, pset, data, hp));
    }
  }

  SUBCASE("memory cap is enforced before allocation") {
    RunConfig cfg = basic_config();
    cfg.memory_cap_bytes = 16;
    CHECK_THROWS_AS(ScoreCache::build(data, cfg), CapacityError);
  }

  SUBCASE("persistence round trip and header checks") {
    const RunConfig cfg = basic_config();
    const ScoreCache cache = ScoreCache::build(data, cfg);
    const std::string path = "cache_roundtrip.bnsc";
    cache.save(path);
    const ScoreCache loaded = ScoreCache::load(path, cfg);
    CHECK(loaded.n() == cache.n());
    Rng rng(5);
    for (int probe = 0; probe < 200; ++probe) {
      const int node = static_cast<int>(rng.next_below(6));
      const std::uint64_t idx = rng.next_below(cache.entries_per_node());
      CHECK(loaded.at(node, idx) == cache.at(node, idx));
    }
    RunConfig other = cfg;
    other.gamma = 0.2;
    CHECK_THROWS_AS(ScoreCache::load(path, other), DataError);
    std::remove(path.c_str());
  }
}

TEST_CASE("effective_local_score") {
  const Dataset data = random_binary_dataset(4, 50, 9);
  const RunConfig cfg = basic_config();
  const ScoreCache cache = ScoreCache::build(data, cfg);

  SUBCASE("neutral priors change nothing") {
    const PriorMatrix neutral = PriorMatrix::neutral(4);
    const ParentSet pset = ParentSet::of({1, 2});
    CHECK(effective_local_score(0, pset, cache, neutral) ==
          cache.lookup(0, pset));
  }

  SUBCASE("single strong prior adds 12.5") {
    PriorMatrix priors = PriorMatrix::neutral(4);
    priors.set(0, 2, 1.0);
    CHECK(effective_local_score(0, ParentSet::of({2}), cache, priors) ==
          cache.lookup(0, ParentSet::of({2})) + 12.5);
  }

  SUBCASE("antisymmetric extremes cancel") {
    PriorMatrix priors = PriorMatrix::neutral(4);
    priors.set(0, 1, 1.0);
    priors.set(0, 2, 0.0);
    CHECK(effective_local_score(0, ParentSet::of({1, 2}), cache, priors) ==
          cache.lookup(0, ParentSet::of({1, 2})));
  }
}

TEST_CASE("score_graph") {
  SUBCASE("empty graph with no data scores zero") {
    const Dataset d({2, 2, 2}, {});
    const ScoreCache cache = ScoreCache::build(d, basic_config());
    CHECK(score_graph(Dag(3), cache, PriorMatrix::neutral(3)).total == 0.0);
  }

  SUBCASE("decomposability") {
    const Dataset data = random_binary_dataset(5, 80, 31);
    const ScoreCache cache = ScoreCache::build(data, basic_config());
    PriorMatrix priors = PriorMatrix::neutral(5);
    priors.set(2, 0, 0.9);
    priors.set(4, 1, 0.2);
    Dag dag(5);
    dag.add_edge(0, 2);
    dag.add_edge(1, 2);
    dag.add_edge(2, 4);
    const ScoredGraph sg = score_graph(dag, cache, priors);
    double expect = 0.0;
    for (int i = 0; i < 5; ++i)
      expect += effective_local_score(i, dag.parents(i), cache, priors);
    CHECK(sg.total == doctest::Approx(expect).epsilon(1e-12));
  }

  SUBCASE("oversized parent set is rejected") {
    const Dataset data = random_binary_dataset(5, 10, 1);
    const ScoreCache cache = ScoreCache::build(data, basic_config(2));
    Dag dag(5);
    dag.set_parents(4, ParentSet::of({0, 1, 2}));
    CHECK_THROWS_AS(score_graph(dag, cache, PriorMatrix::neutral(5)),
                    DataError);
  }

  SUBCASE("chain-generated data scores highest among all 25 3-node DAGs") {
    Rng rng(77);
    Dag chain(3);
    chain.add_edge(0, 1);
    chain.add_edge(1, 2);
    std::vector<std::vector<double>> cpts = {
        {0.3, 0.7}, {0.9, 0.1, 0.1, 0.9}, {0.9, 0.1, 0.1, 0.9}};
    const GroundTruthBn bn{chain, {2, 2, 2}, cpts};
    const Dataset data = forward_sample(bn, 500, rng);
    const ScoreCache cache = ScoreCache::build(data, basic_config());
    const PriorMatrix neutral = PriorMatrix::neutral(3);

    const auto dags = oracle::all_dags(3, 2);
    REQUIRE(dags.size() == 25);
    const double chain_score = score_graph(chain, cache, neutral).total;
    double best = -1e300;
    std::vector<Dag> winners;
    for (const Dag& d : dags) {
      const double sc = score_graph(d, cache, neutral).total;
      if (sc > best) best = sc;
    }
    CHECK(chain_score == doctest::Approx(best).epsilon(1e-9));
    // Only the chain's Markov equivalence class attains the maximum.
    for (const Dag& d : dags) {
      const double sc = score_graph(d, cache, neutral).total;
      if (std::abs(sc - best) < 1e-9) winners.push_back(d);
    }
    CHECK(winners.size() == 3);
  }
}

TEST_CASE("score_order") {
  SUBCASE("single node") {
    const Dataset d({2}, {0, 1, 1, 0});
    const ScoreCache cache = ScoreCache::build(d, basic_config());
    const ScoredGraph sg =
        score_order(Order({0}), cache, PriorMatrix::neutral(1));
    CHECK(sg.total == cache.lookup(0, ParentSet{}));
    CHECK(sg.dag.edge_count() == 0);
  }

  SUBCASE("two nodes expand to the direct formula") {
    const Dataset d({2, 2}, {0, 0, 1, 1, 1, 1, 0, 1});
    const ScoreCache cache = ScoreCache::build(d, basic_config());
    PriorMatrix priors = PriorMatrix::neutral(2);
    priors.set(1, 0, 0.8);
    const ScoredGraph sg = score_order(Order({0, 1}), cache, priors);
    const double with_edge = cache.lookup(1, ParentSet::of({0})) + ppf(0.8);
    const double without = cache.lookup(1, ParentSet{});
    CHECK(sg.total ==
          cache.lookup(0, ParentSet{}) + std::max(with_edge, without));
  }

  SUBCASE("exhaustive n=4 dominance and best-graph consistency") {
    const Dataset data = random_binary_dataset(4, 60, 1234);
    const ScoreCache cache = ScoreCache::build(data, basic_config(3));
    PriorMatrix priors = PriorMatrix::neutral(4);
    priors.set(1, 0, 0.75);
    priors.set(3, 2, 0.2);

    const auto dags = oracle::all_dags(4, 3);
    REQUIRE(dags.size() == 543);
    for (const auto& perm : oracle::all_permutations(4)) {
      const Order order(perm);
      const ScoredGraph sg = score_order(order, cache, priors);

      // the returned graph is consistent and achieves the returned score
      for (int i = 0; i < 4; ++i) CHECK(consistent(sg.dag.parents(i), i, order));
      CHECK(score_graph(sg.dag, cache, priors).total == sg.total);

      // and no consistent DAG beats it (same arithmetic, exact equality)
      double best = -1e300;
      for (const Dag& d : dags) {
        bool ok = true;
        for (int i = 0; i < 4 && ok; ++i) ok = consistent(d.parents(i), i, order);
        if (!ok) continue;
        best = std::max(best, score_graph(d, cache, priors).total);
      }
      CHECK(sg.total == best);
    }
  }

  SUBCASE("prior neutrality: all-0.5 matrix equals the no-prior path") {
    const Dataset data = random_binary_dataset(5, 100, 8);
    const ScoreCache cache = ScoreCache::build(data, basic_config());
    const Order order({3, 0, 4, 1, 2});
    const ScoredGraph a = score_order(order, cache, PriorMatrix::neutral(5));
    double no_prior = 0.0;
    for (int i = 0; i < 5; ++i)
      no_prior += cache.lookup(i, a.dag.parents(i));
    CHECK(a.total == no_prior);
  }

  SUBCASE("raising an edge prior never drops the edge once present") {
    const Dataset data = random_binary_dataset(5, 40, 52);
    const ScoreCache cache = ScoreCache::build(data, basic_config());
    const Order order({2, 0, 3, 1, 4});
    // edge 2 -> 1 is admissible (2 precedes 1)
    bool present_before = false;
    for (double r = 0.5; r <= 1.0 + 1e-9; r += 0.05) {
      PriorMatrix priors = PriorMatrix::neutral(5);
      priors.set(1, 2, std::min(r, 1.0));
      const ScoredGraph sg = score_order(order, cache, priors);
      const bool present = sg.dag.has_edge(2, 1);
      if (present_before) CHECK(present);
      present_before = present;
    }
    CHECK(present_before);  // at r = 1.0 the +12.5 bonus forces the edge
  }
}
