#include "bnmc/engine.hpp"

namespace bnmc {

std::vector<std::pair<std::uint64_t, std::uint64_t>> partition(
    std::uint64_t total, int workers) {
  if (workers < 1) throw UsageError("partition requires workers >= 1");
  std::vector<std::pair<std::uint64_t, std::uint64_t>> ranges(workers);
  const std::uint64_t t = static_cast<std::uint64_t>(workers);
  for (std::uint64_t i = 0; i < t; ++i)
    ranges[i] = {total * i / t, total * (i + 1) / t};
  return ranges;
}

ArgmaxCell argmax_reduce(std::span<const ArgmaxCell> cells) {
  ArgmaxCell best;
  for (const ArgmaxCell& c : cells)
    if (!c.is_identity()) best.consider(c.score, c.idx);
  if (best.is_identity())
    throw UsageError("argmax reduction over empty work");
  return best;
}

OrderScorer::OrderScorer(const ScoreCache& cache, const PriorMatrix& priors,
                         EngineConfig cfg)
    : cache_(&cache), ppf_(priors), cfg_(cfg) {
  if (priors.n() != cache.n())
    throw DataError("priors and cache disagree on node count");
  if (cfg_.workers < 1) throw UsageError("workers must be >= 1");
  if (cfg_.strategy == IndexStrategy::kPst) {
    pst_.reserve(cache.n());
    for (int p = 0; p < cache.n(); ++p)
      pst_.push_back(build_pst(p, cache.s()));
  }
}

ParentSet OrderScorer::set_at(std::uint64_t index, int predecessor_count) const {
  if (cfg_.strategy == IndexStrategy::kPst)
    return ParentSet{pst_[predecessor_count].masks[index]};
  return subset_at(index, predecessor_count, cache_->s());
}

ArgmaxCell OrderScorer::scan_slice(const WorkSlice& slice,
                                   const Order& order) const {
  const std::span<const int> preds(order.perm().data(), slice.position);
  ArgmaxCell best;
  for (std::uint64_t g = slice.lo; g < slice.hi; ++g) {
    const ParentSet pset =
        apply_candidates(set_at(g, slice.position).mask, preds);
    const double eff =
        cache_->lookup(slice.node, pset) + ppf_.sum(slice.node, pset);
    if (eff > best.score) {  // ascending g: ties keep the smallest index
      best.score = eff;
      best.idx = g;
    }
  }
  return best;
}

ScoredGraph OrderScorer::score(const Order& order) const {
  const int n = order.n();
  if (n != cache_->n())
    throw DataError("order and cache disagree on node count");
  const int tasks_per_node =
      cfg_.tasks_per_node > 0 ? cfg_.tasks_per_node : cfg_.workers;

  // Flatten (node, slice) tasks; per node the slices stay in range order.
  std::vector<WorkSlice> tasks;
  std::vector<int> first_task(n + 1, 0);
  tasks.reserve(static_cast<std::size_t>(n) * tasks_per_node);
  for (int p = 0; p < n; ++p) {
    const std::uint64_t total = bounded_subset_count(p, cache_->s());
    for (auto [lo, hi] : partition(total, tasks_per_node))
      if (lo < hi) tasks.push_back({p, order.node_at(p), lo, hi});
    first_task[p + 1] = static_cast<int>(tasks.size());
  }

  std::vector<ArgmaxCell> cells(tasks.size());
  const int task_count = static_cast<int>(tasks.size());
#pragma omp parallel for num_threads(cfg_.workers) schedule(dynamic)
  for (int t = 0; t < task_count; ++t) cells[t] = scan_slice(tasks[t], order);

  Dag dag(n);
  std::vector<double> best_by_node(n, 0.0);
  for (int p = 0; p < n; ++p) {
    const ArgmaxCell win = argmax_reduce(
        std::span<const ArgmaxCell>(cells.data() + first_task[p],
                                    first_task[p + 1] - first_task[p]));
    const std::span<const int> preds(order.perm().data(), p);
    const int node = order.node_at(p);
    dag.set_parents(node, apply_candidates(set_at(win.idx, p).mask, preds));
    best_by_node[node] = win.score;
  }

  double total = 0.0;
  for (int i = 0; i < n; ++i) total += best_by_node[i];
  return {std::move(dag), total};
}

ScoredGraph parallel_score_order(const Order& order, const ScoreCache& cache,
                                 const PriorMatrix& priors, int workers) {
  EngineConfig cfg;
  cfg.workers = workers;
  return OrderScorer(cache, priors, cfg).score(order);
}

std::pair<double, ParentSet> full_bitvector_scan(int node, const Order& order,
                                                 const ScoreCache& cache,
                                                 const PriorMatrix& priors) {
  const int n = order.n();
  const PpfTable ppf(priors);

  std::vector<int> candidates;
  candidates.reserve(n - 1);
  for (int v = 0; v < n; ++v)
    if (v != node) candidates.push_back(v);
  const int c_count = static_cast<int>(candidates.size());

  // Predecessor indicator over the candidate list.
  const std::vector<int> pos = order.positions();
  std::vector<std::uint8_t> admissible(c_count);
  for (int j = 0; j < c_count; ++j)
    admissible[j] = pos[candidates[j]] < pos[node];

  const std::uint64_t subsets = std::uint64_t{1} << c_count;
  std::vector<std::uint8_t> indicator(c_count);
  double best = -std::numeric_limits<double>::infinity();
  ParentSet best_set;
  for (std::uint64_t c = 0; c < subsets; ++c) {
    for (int j = 0; j < c_count; ++j)
      indicator[j] = static_cast<std::uint8_t>((c >> j) & 1u);
    // element-wise consistency comparison against the order
    bool ok = true;
    int size = 0;
    for (int j = 0; j < c_count; ++j) {
      if (indicator[j] && !admissible[j]) ok = false;
      size += indicator[j];
    }
    if (!ok || size > cache.s()) continue;
    ParentSet pset;
    for (int j = 0; j < c_count; ++j)
      if (indicator[j]) pset.add(candidates[j]);
    const double eff = cache.lookup(node, pset) + ppf.sum(node, pset);
    if (eff > best) {
      best = eff;
      best_set = pset;
    }
  }
  return {best, best_set};
}

}  // namespace bnmc
