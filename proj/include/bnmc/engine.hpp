#ifndef BNMC_ENGINE_HPP
#define BNMC_ENGINE_HPP

#include <cstdint>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "bnmc/scoring.hpp"
#include "bnmc/types.hpp"

namespace bnmc {

// Half-open range of global parent-set indices for one node of an order.
struct WorkSlice {
  int position = 0;  // position of the node in the order
  int node = 0;
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
};

// One worker's local best: score and the global parent-set index achieving
// it. Reduction is associative and commutative under the tie rule (higher
// score wins, equal scores go to the smaller index), so any reduction tree
// over any partition yields the same cell.
struct ArgmaxCell {
  static constexpr std::uint64_t kNoIndex =
      std::numeric_limits<std::uint64_t>::max();

  double score = -std::numeric_limits<double>::infinity();
  std::uint64_t idx = kNoIndex;

  bool is_identity() const { return idx == kNoIndex; }

  void consider(double s, std::uint64_t i) {
    if (s > score || (s == score && i < idx)) {
      score = s;
      idx = i;
    }
  }
};

// Disjoint cover of [0, total) by floor(i*total/workers) boundaries; range
// sizes differ by at most one. Degenerate (empty) ranges are possible when
// total < workers.
std::vector<std::pair<std::uint64_t, std::uint64_t>> partition(
    std::uint64_t total, int workers);

// Deterministic reduction of worker cells. Throws UsageError when every
// cell is the identity (no work was scanned).
ArgmaxCell argmax_reduce(std::span<const ArgmaxCell> cells);

enum class IndexStrategy {
  kPst,     // read parent sets from the precomputed table
  kUnrank,  // recover parent sets from indices on the fly
};

struct EngineConfig {
  int workers = 1;
  int tasks_per_node = 0;  // 0 = same as workers
  IndexStrategy strategy = IndexStrategy::kPst;

  static EngineConfig from(const RunConfig& cfg) {
    return {cfg.workers, cfg.tasks_per_node,
            cfg.use_pst ? IndexStrategy::kPst : IndexStrategy::kUnrank};
  }
};

// Data-parallel order scorer. Each (node, slice) task scans its index range
// against the immutable cache and writes one ArgmaxCell; the driver reduces
// cells in slice order and sums per-node bests in ascending node order.
// Output is bit-identical to the serial score_order for every worker count,
// task granularity, and index strategy.
class OrderScorer {
 public:
  OrderScorer(const ScoreCache& cache, const PriorMatrix& priors,
              EngineConfig cfg);

  ScoredGraph score(const Order& order) const;

  // Scans one slice; exposed for tests. An empty slice yields the identity.
  ArgmaxCell scan_slice(const WorkSlice& slice, const Order& order) const;

  const EngineConfig& config() const { return cfg_; }

  // Parent set (as candidate positions) at a global index, via the active
  // strategy.
  ParentSet set_at(std::uint64_t index, int predecessor_count) const;

 private:
  const ScoreCache* cache_;
  PpfTable ppf_;
  EngineConfig cfg_;
  std::vector<ParentSetTable> pst_;  // one table per predecessor count
};

// Convenience wrapper implementing the engine contract in one call.
ScoredGraph parallel_score_order(const Order& order, const ScoreCache& cache,
                                 const PriorMatrix& priors, int workers);

// Exhaustive baseline for the enumeration benchmark: every one of the
// 2^(n-1) candidate subsets is generated as a per-element indicator vector,
// compared element-wise against the node's predecessor set to filter the
// order-consistent ones, and the consistent subsets within the size limit
// are scored. Returns the best (score, parent set) and agrees with the
// bounded scan. Kept only to measure the bounded enumeration against; never
// used by the sampler.
std::pair<double, ParentSet> full_bitvector_scan(int node, const Order& order,
                                                 const ScoreCache& cache,
                                                 const PriorMatrix& priors);

}  // namespace bnmc

#endif
