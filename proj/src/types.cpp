#include "bnmc/types.hpp"

#include <algorithm>
#include <queue>

namespace bnmc {

Dataset::Dataset(std::vector<int> cardinalities, std::vector<std::uint8_t> rows)
    : cards_(std::move(cardinalities)), cells_(std::move(rows)) {
  const auto n = cards_.size();
  if (n == 0 || n > static_cast<std::size_t>(kMaxNodes))
    throw DataError("dataset must have between 1 and 64 variables");
  for (std::size_t i = 0; i < n; ++i) {
    if (cards_[i] < 2 || cards_[i] > 256)
      throw DataError("cardinality of variable " + std::to_string(i) +
                      " out of range [2,256]");
  }
  if (cells_.size() % n != 0)
    throw DataError("row data is not a multiple of the variable count");
  m_ = cells_.size() / n;
  for (std::size_t r = 0; r < m_; ++r)
    for (std::size_t i = 0; i < n; ++i)
      if (cells_[r * n + i] >= cards_[i])
        throw DataError("state out of range at row " + std::to_string(r) +
                        ", column " + std::to_string(i));
}

Order::Order(std::vector<int> perm) : perm_(std::move(perm)) {
  const int n = static_cast<int>(perm_.size());
  if (n > kMaxNodes) throw DataError("order exceeds 64 nodes");
  std::vector<bool> seen(n, false);
  for (int v : perm_) {
    if (v < 0 || v >= n || seen[v])
      throw DataError("order is not a permutation of 0..n-1");
    seen[v] = true;
  }
}

Order Order::identity(int n) {
  std::vector<int> p(n);
  for (int i = 0; i < n; ++i) p[i] = i;
  return Order(std::move(p));
}

std::vector<int> Order::positions() const {
  std::vector<int> pos(perm_.size());
  for (int p = 0; p < static_cast<int>(perm_.size()); ++p) pos[perm_[p]] = p;
  return pos;
}

Dag::Dag(std::vector<ParentSet> parents) : parents_(std::move(parents)) {
  if (parents_.size() > static_cast<std::size_t>(kMaxNodes))
    throw DataError("graph exceeds 64 nodes");
  for (int i = 0; i < n(); ++i) {
    ParentSet p = parents_[i];
    parents_[i] = ParentSet{};
    set_parents(i, p);
  }
}

void Dag::set_parents(int node, ParentSet pset) {
  if (pset.contains(node))
    throw DataError("self-loop at node " + std::to_string(node));
  if (n() < kMaxNodes && (pset.mask >> n()) != 0)
    throw DataError("parent index out of range for node " +
                    std::to_string(node));
  parents_[node] = pset;
}

void Dag::add_edge(int parent, int child) {
  ParentSet p = parents_[child];
  p.add(parent);
  set_parents(child, p);
}

std::size_t Dag::edge_count() const {
  std::size_t total = 0;
  for (const ParentSet& p : parents_) total += p.size();
  return total;
}

PriorMatrix PriorMatrix::neutral(int n) {
  PriorMatrix m;
  m.n_ = n;
  m.v_.assign(static_cast<std::size_t>(n) * n, 0.5);
  return m;
}

PriorMatrix::PriorMatrix(int n, std::vector<double> values)
    : n_(n), v_(std::move(values)) {
  if (v_.size() != static_cast<std::size_t>(n) * n)
    throw DataError("prior matrix must be n x n");
  for (double x : v_)
    if (!(x >= 0.0 && x <= 1.0))
      throw DataError("prior matrix entries must lie in [0,1]");
}

void PriorMatrix::set(int child, int parent, double value) {
  if (!(value >= 0.0 && value <= 1.0))
    throw DataError("prior matrix entries must lie in [0,1]");
  v_[child * n_ + parent] = value;
}

bool PriorMatrix::is_neutral() const {
  for (int i = 0; i < n_; ++i)
    for (int m = 0; m < n_; ++m)
      if (i != m && r(i, m) != 0.5) return false;
  return true;
}

void RunConfig::validate() const {
  if (max_parents < 0 || max_parents > 8)
    throw UsageError("max-parents must lie in [0,8]");
  if (!(gamma > 0.0 && gamma <= 1.0))
    throw UsageError("gamma must lie in (0,1]");
  if (!(ess > 0.0)) throw UsageError("ess must be positive");
  if (iterations < 1) throw UsageError("iterations must be >= 1");
  if (workers < 1) throw UsageError("workers must be >= 1");
  if (track_top < 1) throw UsageError("track-top must be >= 1");
  if (tasks_per_node < 0) throw UsageError("tasks-per-node must be >= 0");
}

bool is_acyclic(const Dag& dag) {
  try {
    topological_order(dag);
    return true;
  } catch (const DataError&) {
    return false;
  }
}

bool consistent(ParentSet pset, int node, const Order& order) {
  std::vector<int> pos = order.positions();
  const int child_pos = pos[node];
  bool ok = true;
  pset.for_each([&](int parent) { ok = ok && pos[parent] < child_pos; });
  return ok;
}

Order topological_order(const Dag& dag) {
  const int n = dag.n();
  std::vector<int> indegree(n);
  for (int i = 0; i < n; ++i) indegree[i] = dag.parents(i).size();

  // Min-heap keyed on node index gives the deterministic tie-break.
  std::priority_queue<int, std::vector<int>, std::greater<int>> ready;
  for (int i = 0; i < n; ++i)
    if (indegree[i] == 0) ready.push(i);

  std::vector<int> perm;
  perm.reserve(n);
  while (!ready.empty()) {
    const int v = ready.top();
    ready.pop();
    perm.push_back(v);
    for (int child = 0; child < n; ++child) {
      if (dag.parents(child).contains(v) && --indegree[child] == 0)
        ready.push(child);
    }
  }
  if (static_cast<int>(perm.size()) != n)
    throw DataError("graph contains a cycle");
  return Order(std::move(perm));
}

}  // namespace bnmc
