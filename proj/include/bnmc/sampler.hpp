#ifndef BNMC_SAMPLER_HPP
#define BNMC_SAMPLER_HPP

#include <cstdint>
#include <vector>

#include "bnmc/engine.hpp"
#include "bnmc/rng.hpp"
#include "bnmc/scoring.hpp"
#include "bnmc/types.hpp"

namespace bnmc {

// Top-K scored graphs seen so far, sorted by score descending (equal scores
// ordered by parent masks) and deduplicated by graph identity.
class BestGraphTracker {
 public:
  explicit BestGraphTracker(int capacity);

  // Inserts when the graph is new and either capacity is unfilled or the
  // score beats the current minimum. Returns whether anything changed.
  bool update(const ScoredGraph& g);

  const std::vector<ScoredGraph>& entries() const { return entries_; }
  const ScoredGraph& best() const { return entries_.front(); }
  double best_score() const { return entries_.front().total; }
  bool empty() const { return entries_.empty(); }
  int capacity() const { return capacity_; }

 private:
  int capacity_;
  std::vector<ScoredGraph> entries_;
};

// Uniformly swaps two distinct positions. Requires n >= 2.
Order propose_swap(const Order& order, Rng& rng);

// Metropolis-Hastings in log10 space: accept iff log10(u) < new - old with
// u uniform on (0,1). A non-worse score is always accepted.
bool mh_accept(double old_score, double new_score, Rng& rng);

struct TraceRow {
  std::uint64_t iteration;  // 1-based
  double proposed_score;
  bool accepted;
  double best_score;  // tracker best after this iteration
};

struct McmcResult {
  BestGraphTracker tracker;
  std::vector<TraceRow> trace;
  Order final_order;
  double final_score = 0.0;
  std::uint64_t accepted = 0;
  double preprocess_seconds = 0.0;
  double sampling_seconds = 0.0;
};

// The full chain: cache build (skipped when a prebuilt cache is supplied),
// random initial order, then iterations of propose-score-compare-update.
// All randomness comes from streams split off cfg.seed, so outputs are a
// function of (dataset, config, priors) alone, for any worker count.
McmcResult run_mcmc(const Dataset& data, const RunConfig& cfg,
                    const PriorMatrix& priors,
                    const ScoreCache* prebuilt = nullptr);

}  // namespace bnmc

#endif
