#include "bnmc/evalgen.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "bnmc/combinatorics.hpp"

namespace bnmc {

std::uint64_t GroundTruthBn::config_count(int node) const {
  std::uint64_t r = 1;
  dag.parents(node).for_each([&](int p) { r *= cardinalities[p]; });
  return r;
}

void GroundTruthBn::validate() const {
  const int n = dag.n();
  if (static_cast<int>(cardinalities.size()) != n ||
      static_cast<int>(cpts.size()) != n)
    throw DataError("ground truth arrays do not match the node count");
  for (int i = 0; i < n; ++i) {
    const int card = cardinalities[i];
    const std::uint64_t r = config_count(i);
    if (cpts[i].size() != r * card)
      throw DataError("CPT of node " + std::to_string(i) +
                      " has the wrong shape");
    for (std::uint64_t k = 0; k < r; ++k) {
      double row = 0.0;
      for (int j = 0; j < card; ++j) row += cpts[i][k * card + j];
      if (std::abs(row - 1.0) > 1e-9)
        throw DataError("CPT row of node " + std::to_string(i) +
                        " does not sum to 1");
    }
  }
}

Dag random_dag(int n, int max_parents, double edge_prob, Rng& rng) {
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  shuffle(perm, rng);

  Dag dag(n);
  for (int p = 1; p < n; ++p) {
    ParentSet parents;
    for (int q = p - 1; q >= 0 && parents.size() < max_parents; --q)
      if (rng.next_unit() < edge_prob) parents.add(perm[q]);
    dag.set_parents(perm[p], parents);
  }
  return dag;
}

GroundTruthBn random_ground_truth(const Dag& dag,
                                  const std::vector<int>& cardinalities,
                                  double concentration, Rng& rng) {
  if (!(concentration > 0.0))
    throw UsageError("Dirichlet concentration must be positive");
  GroundTruthBn bn{dag, cardinalities, {}};
  bn.cpts.resize(dag.n());
  for (int i = 0; i < dag.n(); ++i) {
    const int card = cardinalities[i];
    const std::uint64_t r = bn.config_count(i);
    auto& cpt = bn.cpts[i];
    cpt.resize(r * card);
    for (std::uint64_t k = 0; k < r; ++k) {
      double total = 0.0;
      for (int j = 0; j < card; ++j) {
        cpt[k * card + j] = rng.next_gamma(concentration);
        total += cpt[k * card + j];
      }
      for (int j = 0; j < card; ++j) cpt[k * card + j] /= total;
    }
  }
  return bn;
}

Dataset forward_sample(const GroundTruthBn& bn, std::size_t rows, Rng& rng) {
  bn.validate();
  const int n = bn.dag.n();
  const Order topo = topological_order(bn.dag);

  std::vector<std::uint8_t> cells(rows * n);
  std::vector<int> state(n);
  for (std::size_t t = 0; t < rows; ++t) {
    for (int p = 0; p < n; ++p) {
      const int node = topo.node_at(p);
      const int card = bn.cardinalities[node];
      std::uint64_t k = 0, radix = 1;
      bn.dag.parents(node).for_each([&](int parent) {
        k += radix * state[parent];
        radix *= bn.cardinalities[parent];
      });
      const double* row = bn.cpts[node].data() + k * card;
      const double u = rng.next_unit();
      double cum = 0.0;
      int drawn = card - 1;  // guard against rounding past the last state
      for (int j = 0; j < card; ++j) {
        cum += row[j];
        if (u < cum) {
          drawn = j;
          break;
        }
      }
      state[node] = drawn;
      cells[t * n + node] = static_cast<std::uint8_t>(drawn);
    }
  }
  return Dataset(bn.cardinalities, std::move(cells));
}

Dataset inject_noise(const Dataset& data, double p, Rng& rng) {
  if (!(p >= 0.0 && p <= 1.0))
    throw UsageError("flip probability must lie in [0,1]");
  const int n = data.n();
  std::vector<std::uint8_t> cells = data.cells();
  for (std::size_t t = 0; t < data.rows(); ++t) {
    for (int i = 0; i < n; ++i) {
      if (rng.next_unit() < p) {
        const int card = data.cardinality(i);
        std::uint8_t& cell = cells[t * n + i];
        if (card == 2)
          cell ^= 1u;
        else
          cell = static_cast<std::uint8_t>(
              (cell + 1 + rng.next_below(card - 1)) % card);
      }
    }
  }
  return Dataset(data.cardinalities(), std::move(cells));
}

ConfusionCounts confusion(const Dag& learned, const Dag& truth) {
  if (learned.n() != truth.n())
    throw DataError("graphs disagree on node count");
  ConfusionCounts c;
  for (int child = 0; child < truth.n(); ++child) {
    for (int parent = 0; parent < truth.n(); ++parent) {
      if (parent == child) continue;
      const bool in_truth = truth.has_edge(parent, child);
      const bool in_learned = learned.has_edge(parent, child);
      if (in_truth && in_learned)
        ++c.tp;
      else if (!in_truth && in_learned)
        ++c.fp;
      else if (in_truth && !in_learned)
        ++c.fn;
      else
        ++c.tn;
    }
  }
  return c;
}

PriorMatrix prior_perturbation_protocol(const Dag& truth, const Dag& baseline,
                                        std::pair<double, double> strengths,
                                        double fraction, Rng& rng) {
  if (truth.n() != baseline.n())
    throw DataError("graphs disagree on node count");
  if (!(fraction >= 0.0 && fraction <= 1.0))
    throw UsageError("fraction must lie in [0,1]");
  PriorMatrix priors = PriorMatrix::neutral(truth.n());
  for (int child = 0; child < truth.n(); ++child) {
    for (int parent = 0; parent < truth.n(); ++parent) {
      if (parent == child) continue;
      const bool in_truth = truth.has_edge(parent, child);
      const bool in_baseline = baseline.has_edge(parent, child);
      if (in_truth && !in_baseline && rng.next_unit() < fraction)
        priors.set(child, parent, strengths.first);  // falsely removed
      else if (!in_truth && in_baseline && rng.next_unit() < fraction)
        priors.set(child, parent, strengths.second);  // falsely added
    }
  }
  return priors;
}

BigInt count_dags(int n) {
  if (n < 0 || n > 20) throw UsageError("count_dags supports 0 <= n <= 20");
  std::vector<BigInt> a(n + 1);
  a[0] = 1;
  for (int m = 1; m <= n; ++m) {
    BigInt total = 0;
    for (int k = 1; k <= m; ++k) {
      BigInt term = BigInt(binomial(m, k)) * (BigInt(1) << (k * (m - k))) *
                    a[m - k];
      if (k % 2 == 1)
        total += term;
      else
        total -= term;
    }
    a[m] = total;
  }
  return a[n];
}

std::uint64_t count_orders(int n) {
  if (n < 0 || n > 20) throw UsageError("count_orders supports 0 <= n <= 20");
  std::uint64_t f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace bnmc
