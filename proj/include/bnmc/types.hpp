#ifndef BNMC_TYPES_HPP
#define BNMC_TYPES_HPP

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace bnmc {

// Node count is capped at one machine word so a parent set is a single
// 64-bit mask.
inline constexpr int kMaxNodes = 64;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// Bad flags or an inconsistent configuration. CLI exit code 2.
struct UsageError : Error {
  using Error::Error;
};
// Malformed or invalid input data (files, graphs, matrices). Exit code 3.
struct DataError : Error {
  using Error::Error;
};
// A computation whose memory estimate exceeds the configured cap. Exit code 4.
struct CapacityError : Error {
  using Error::Error;
};

// Set of parent node indices as a bitmask. Empty set == mask 0.
struct ParentSet {
  std::uint64_t mask = 0;

  static ParentSet of(std::initializer_list<int> nodes) {
    ParentSet p;
    for (int v : nodes) p.add(v);
    return p;
  }

  int size() const { return std::popcount(mask); }
  bool empty() const { return mask == 0; }
  bool contains(int node) const { return (mask >> node) & 1u; }
  void add(int node) { mask |= std::uint64_t{1} << node; }
  void remove(int node) { mask &= ~(std::uint64_t{1} << node); }

  // Calls f(node) for each member in ascending node order.
  template <class F>
  void for_each(F&& f) const {
    for (std::uint64_t m = mask; m != 0; m &= m - 1)
      f(std::countr_zero(m));
  }

  std::vector<int> members() const {
    std::vector<int> out;
    out.reserve(size());
    for_each([&](int v) { out.push_back(v); });
    return out;
  }

  friend bool operator==(ParentSet a, ParentSet b) { return a.mask == b.mask; }
  friend bool operator<(ParentSet a, ParentSet b) { return a.mask < b.mask; }
};

// Complete discrete dataset: m rows of n state indices, row-major.
// States at column i lie in [0, cardinality[i]).
class Dataset {
 public:
  Dataset() = default;
  Dataset(std::vector<int> cardinalities, std::vector<std::uint8_t> rows);

  int n() const { return static_cast<int>(cards_.size()); }
  std::size_t rows() const { return m_; }
  int cardinality(int i) const { return cards_[i]; }
  const std::vector<int>& cardinalities() const { return cards_; }
  std::uint8_t state(std::size_t row, int col) const {
    return cells_[row * cards_.size() + col];
  }
  const std::vector<std::uint8_t>& cells() const { return cells_; }

  friend bool operator==(const Dataset& a, const Dataset& b) {
    return a.cards_ == b.cards_ && a.cells_ == b.cells_;
  }

 private:
  std::vector<int> cards_;
  std::vector<std::uint8_t> cells_;
  std::size_t m_ = 0;
};

// Topological order: perm[p] is the node at position p.
class Order {
 public:
  Order() = default;
  explicit Order(std::vector<int> perm);
  static Order identity(int n);

  int n() const { return static_cast<int>(perm_.size()); }
  int node_at(int pos) const { return perm_[pos]; }
  const std::vector<int>& perm() const { return perm_; }

  // positions()[v] is the position of node v.
  std::vector<int> positions() const;

  void swap_positions(int a, int b) { std::swap(perm_[a], perm_[b]); }

  friend bool operator==(const Order& a, const Order& b) {
    return a.perm_ == b.perm_;
  }

 private:
  std::vector<int> perm_;
};

// Directed graph as per-node parent sets. Acyclicity is not enforced on
// construction (is_acyclic / topological_order check it); self-loops and
// out-of-range parents are rejected immediately.
class Dag {
 public:
  Dag() = default;
  explicit Dag(int n) : parents_(n) {}
  explicit Dag(std::vector<ParentSet> parents);

  int n() const { return static_cast<int>(parents_.size()); }
  ParentSet parents(int node) const { return parents_[node]; }
  const std::vector<ParentSet>& all_parents() const { return parents_; }
  void set_parents(int node, ParentSet pset);
  void add_edge(int parent, int child);

  bool has_edge(int parent, int child) const {
    return parents_[child].contains(parent);
  }
  std::size_t edge_count() const;

  friend bool operator==(const Dag& a, const Dag& b) {
    return a.parents_ == b.parents_;
  }
  friend bool operator<(const Dag& a, const Dag& b) {
    return a.parents_ < b.parents_;
  }

 private:
  std::vector<ParentSet> parents_;
};

// Pairwise edge beliefs: r(i, m) in [0,1] is the belief in an edge from
// node m into node i. 0.5 means no bias; the diagonal is ignored.
class PriorMatrix {
 public:
  PriorMatrix() = default;
  static PriorMatrix neutral(int n);
  PriorMatrix(int n, std::vector<double> values);

  int n() const { return n_; }
  double r(int child, int parent) const { return v_[child * n_ + parent]; }
  void set(int child, int parent, double value);
  bool is_neutral() const;

 private:
  int n_ = 0;
  std::vector<double> v_;
};

enum class AlphaMode { kBdeu, kK2 };

struct RunConfig {
  int max_parents = 4;       // s
  double gamma = 0.1;        // per-parent structure penalty, in (0,1]
  double ess = 1.0;          // equivalent sample size
  AlphaMode alpha_mode = AlphaMode::kBdeu;
  std::uint64_t iterations = 1;
  std::uint64_t seed = 0;
  int workers = 1;
  int track_top = 10;               // best graphs retained
  bool strict_paper_tracker = false;  // update tracker only on accepted orders
  bool use_pst = true;                // parent set table vs on-the-fly unranking
  int tasks_per_node = 0;             // 0 = same as workers
  std::uint64_t memory_cap_bytes = std::uint64_t{4} << 30;
  bool debug_recheck = false;  // recompute the chain score every 100 iterations

  void validate() const;
};

// ---- core operations ----

bool is_acyclic(const Dag& dag);

// True iff every member of pset precedes node in the order.
bool consistent(ParentSet pset, int node, const Order& order);

// Kahn's procedure; ties broken by lowest node index. Throws DataError on a
// cycle.
Order topological_order(const Dag& dag);

}  // namespace bnmc

#endif
