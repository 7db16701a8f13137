#include "bnmc/sampler.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

namespace bnmc {

namespace {
// Stream tags for the three independent randomness consumers.
constexpr std::uint64_t kStreamInitialOrder = 1;
constexpr std::uint64_t kStreamProposal = 2;
constexpr std::uint64_t kStreamAcceptance = 3;

bool precedes(const ScoredGraph& a, const ScoredGraph& b) {
  if (a.total != b.total) return a.total > b.total;
  return a.dag < b.dag;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}
}  // namespace

BestGraphTracker::BestGraphTracker(int capacity) : capacity_(capacity) {
  if (capacity < 1) throw UsageError("tracker capacity must be >= 1");
  entries_.reserve(capacity);
}

bool BestGraphTracker::update(const ScoredGraph& g) {
  for (const ScoredGraph& e : entries_)
    if (e.dag == g.dag) return false;  // already tracked
  const bool full = static_cast<int>(entries_.size()) == capacity_;
  if (full && g.total <= entries_.back().total) return false;
  auto pos = std::lower_bound(entries_.begin(), entries_.end(), g, precedes);
  entries_.insert(pos, g);
  if (full) entries_.pop_back();
  return true;
}

Order propose_swap(const Order& order, Rng& rng) {
  const int n = order.n();
  if (n < 2) throw UsageError("swap proposal needs at least two nodes");
  const int a = static_cast<int>(rng.next_below(n));
  int b = static_cast<int>(rng.next_below(n - 1));
  if (b >= a) ++b;
  Order next = order;
  next.swap_positions(a, b);
  return next;
}

bool mh_accept(double old_score, double new_score, Rng& rng) {
  return std::log10(rng.next_unit_open()) < new_score - old_score;
}

McmcResult run_mcmc(const Dataset& data, const RunConfig& cfg,
                    const PriorMatrix& priors, const ScoreCache* prebuilt) {
  cfg.validate();
  if (data.rows() == 0) throw DataError("learning requires at least one row");
  if (priors.n() != data.n())
    throw DataError("prior matrix does not match the dataset's node count");
  if (prebuilt && prebuilt->n() != data.n())
    throw DataError("prebuilt cache does not match the dataset's node count");

  McmcResult result{BestGraphTracker(cfg.track_top), {}, Order(), 0.0, 0, 0.0,
                    0.0};

  const auto t_pre = std::chrono::steady_clock::now();
  ScoreCache cache;
  if (!prebuilt) cache = ScoreCache::build(data, cfg);
  const ScoreCache& active = prebuilt ? *prebuilt : cache;
  result.preprocess_seconds = seconds_since(t_pre);

  const OrderScorer scorer(active, priors, EngineConfig::from(cfg));
  const Rng master(cfg.seed);
  Rng init_rng = master.split(kStreamInitialOrder);
  Rng proposal_rng = master.split(kStreamProposal);
  Rng accept_rng = master.split(kStreamAcceptance);

  const auto t_run = std::chrono::steady_clock::now();
  std::vector<int> perm(data.n());
  std::iota(perm.begin(), perm.end(), 0);
  shuffle(perm, init_rng);
  Order order(std::move(perm));

  ScoredGraph current = scorer.score(order);
  result.tracker.update(current);
  result.trace.reserve(cfg.iterations);

  for (std::uint64_t it = 1; it <= cfg.iterations; ++it) {
    const Order proposed = propose_swap(order, proposal_rng);
    ScoredGraph scored = scorer.score(proposed);
    const double proposed_score = scored.total;
    const bool accepted = mh_accept(current.total, proposed_score, accept_rng);
    if (accepted || !cfg.strict_paper_tracker) result.tracker.update(scored);
    if (accepted) {
      order = proposed;
      current = std::move(scored);
      ++result.accepted;
    }
    result.trace.push_back(
        {it, proposed_score, accepted, result.tracker.best_score()});
    if (cfg.debug_recheck && it % 100 == 0) {
      const ScoredGraph check = score_order(order, active, priors);
      if (check.total != current.total)
        throw Error("chain score drifted from recomputation at iteration " +
                    std::to_string(it));
    }
  }
  result.sampling_seconds = seconds_since(t_run);
  result.final_order = order;
  result.final_score = current.total;
  return result;
}

}  // namespace bnmc
