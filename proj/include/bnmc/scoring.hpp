#ifndef BNMC_SCORING_HPP
#define BNMC_SCORING_HPP

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "bnmc/combinatorics.hpp"
#include "bnmc/types.hpp"

namespace bnmc {

inline double log10_gamma(double x) {
  return std::lgamma(x) * 0.43429448190325182765;  // 1/ln(10)
}

// Dirichlet hyperparameter scheme. BDeu: alpha_ijk = ess / (r_i * |v_i|);
// K2: alpha_ijk = 1.
struct Hyperparams {
  double gamma = 0.1;
  double ess = 1.0;
  AlphaMode alpha_mode = AlphaMode::kBdeu;

  double alpha_cell(std::uint64_t r_i, int child_card) const {
    return alpha_mode == AlphaMode::kBdeu
               ? ess / (static_cast<double>(r_i) * child_card)
               : 1.0;
  }

  friend bool operator==(const Hyperparams&, const Hyperparams&) = default;
};

// N_ijk / N_ik counts for one (node, parent set) pair. The parent
// configuration index is the mixed-radix encoding of the parent states with
// the lowest-indexed parent as the least significant digit. Storage is dense
// for small configuration spaces and an ordered map otherwise; iteration is
// ascending in the configuration index either way.
class CountTable {
 public:
  CountTable(std::uint64_t configs, int child_card);

  std::uint64_t configs() const { return r_i_; }  // r_i
  int child_card() const { return card_; }
  std::uint64_t samples() const { return total_; }

  void tally(std::uint64_t config, int state);
  std::uint32_t njk(std::uint64_t config, int state) const;
  std::uint32_t nk(std::uint64_t config) const;

  // f(config, const std::uint32_t* counts) for every config with nk > 0,
  // ascending.
  template <class F>
  void for_each_active(F&& f) const {
    if (dense()) {
      for (std::uint64_t k = 0; k < r_i_; ++k) {
        const std::uint32_t* c = dense_.data() + k * card_;
        std::uint32_t row = 0;
        for (int j = 0; j < card_; ++j) row += c[j];
        if (row > 0) f(k, c);
      }
    } else {
      for (const auto& [k, c] : sparse_) f(k, c.data());
    }
  }

 private:
  bool dense() const { return !dense_.empty() || r_i_ == 0; }

  std::uint64_t r_i_;
  int card_;
  std::uint64_t total_ = 0;
  std::vector<std::uint32_t> dense_;  // r_i * card when small enough
  std::map<std::uint64_t, std::vector<std::uint32_t>> sparse_;
};

CountTable count_statistics(const Dataset& data, int node, ParentSet pset);

// Log10 Bayesian Dirichlet local score:
//   |pset| * log10(gamma)
//   + sum_k [ lG(a_ik) - lG(a_ik + N_ik) + sum_j (lG(N_ijk + a_ijk) - lG(a_ijk)) ]
// with lG = log10 of the gamma function. Configurations with N_ik = 0
// contribute exactly zero and are skipped.
double local_score(int node, ParentSet pset, const Dataset& data,
                   const Hyperparams& hyper);
double local_score_from_counts(const CountTable& counts, int pset_size,
                               const Hyperparams& hyper);

// Pairwise prior function: 100 * (r - 0.5)^3. Zero at 0.5, positive above,
// negative below; +-12.5 at the extremes.
double ppf(double r_value);

// Precomputed PPF weights for every ordered (child, parent) pair.
class PpfTable {
 public:
  PpfTable() = default;
  explicit PpfTable(const PriorMatrix& priors);

  double weight(int child, int parent) const { return w_[child * n_ + parent]; }
  // Sum over members of pset in ascending parent order.
  double sum(int child, ParentSet pset) const {
    double total = 0.0;
    pset.for_each([&](int parent) { total += weight(child, parent); });
    return total;
  }

 private:
  int n_ = 0;
  std::vector<double> w_;
};

// Dense per-node table of local scores for every parent set with size <= s,
// addressed by the global subset ordering over the node's candidate list
// (all nodes except itself, ascending). Write-once at build, then immutable.
class ScoreCache {
 public:
  ScoreCache() = default;  // empty placeholder; build() or load() fill it

  // Bytes the score table itself will occupy; checked against the memory
  // cap before any allocation.
  static std::uint64_t estimate_bytes(int n, int s);

  // Computes every entry; parallel over nodes when cfg.workers > 1.
  static ScoreCache build(const Dataset& data, const RunConfig& cfg);

  int n() const { return n_; }
  int s() const { return s_; }
  const Hyperparams& hyper() const { return hyper_; }
  std::uint64_t entries_per_node() const { return per_node_; }

  std::uint64_t index_of(int node, ParentSet pset) const {
    // Candidate position of parent p is p minus one if p > node.
    const std::uint64_t low = pset.mask & ((std::uint64_t{1} << node) - 1);
    const std::uint64_t high =
        node + 1 < 64 ? (pset.mask >> (node + 1)) << node : 0;
    return global_index(ParentSet{low | high}, n_ - 1, s_);
  }

  double at(int node, std::uint64_t index) const {
    return table_[node * per_node_ + index];
  }
  double lookup(int node, ParentSet pset) const {
    return at(node, index_of(node, pset));
  }

  // Flat binary persistence. 16-byte header: magic "BNSC", format version,
  // n, s, alpha mode, then a 64-bit FNV-1a digest of (gamma, ess); body is
  // n * entries_per_node little-endian doubles in (node, global index)
  // order. load() rejects files whose header disagrees with cfg.
  void save(const std::string& path) const;
  static ScoreCache load(const std::string& path, const RunConfig& cfg);

 private:
  int n_ = 0;
  int s_ = 0;
  Hyperparams hyper_;
  std::uint64_t per_node_ = 0;
  std::vector<double> table_;
};

// Cached local score plus the PPF sum over the parent set.
double effective_local_score(int node, ParentSet pset, const ScoreCache& cache,
                             const PriorMatrix& priors);

struct ScoredGraph {
  Dag dag;
  double total = 0.0;
};

// Sum of effective local scores over nodes in ascending node order. All
// graph and order totals in this project use that fixed summation order so
// equal graphs produce bit-identical totals.
ScoredGraph score_graph(const Dag& dag, const ScoreCache& cache,
                        const PriorMatrix& priors);

// Serial reference order scorer: for each node, maximizes the effective
// local score over all subsets of its order-predecessors with size <= s,
// streaming the subsets in global-index order (ties keep the smallest
// index). The returned graph is consistent with the order by construction
// and achieves exactly the returned total.
ScoredGraph score_order(const Order& order, const ScoreCache& cache,
                        const PriorMatrix& priors);

}  // namespace bnmc

#endif
