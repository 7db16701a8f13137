#include "bnmc/scoring.hpp"

#include <array>
#include <bit>
#include <fstream>
#include <limits>
#include <span>

namespace bnmc {

namespace {
// Dense count storage up to this many cells; ordered-map fallback above.
constexpr std::uint64_t kDenseCells = std::uint64_t{1} << 22;

constexpr char kCacheMagic[4] = {'B', 'N', 'S', 'C'};
constexpr std::uint8_t kCacheVersion = 1;

std::uint64_t fnv1a(const std::uint8_t* bytes, std::size_t len) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (std::size_t i = 0; i < len; ++i) {
    h ^= bytes[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

std::uint64_t hyper_digest(const Hyperparams& hp) {
  std::array<std::uint8_t, 16> buf{};
  const std::uint64_t g = std::bit_cast<std::uint64_t>(hp.gamma);
  const std::uint64_t e = std::bit_cast<std::uint64_t>(hp.ess);
  for (int i = 0; i < 8; ++i) {
    buf[i] = static_cast<std::uint8_t>(g >> (8 * i));
    buf[8 + i] = static_cast<std::uint8_t>(e >> (8 * i));
  }
  return fnv1a(buf.data(), buf.size());
}

void put_u64(std::ostream& out, std::uint64_t v) {
  std::uint8_t b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<std::uint8_t>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 8);
}

std::uint64_t get_u64(std::istream& in) {
  std::uint8_t b[8];
  in.read(reinterpret_cast<char*>(b), 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= std::uint64_t{b[i]} << (8 * i);
  return v;
}
}  // namespace

CountTable::CountTable(std::uint64_t configs, int child_card)
    : r_i_(configs), card_(child_card) {
  if (r_i_ > 0 && r_i_ <= kDenseCells / card_)
    dense_.assign(r_i_ * card_, 0);
}

void CountTable::tally(std::uint64_t config, int state) {
  if (dense()) {
    ++dense_[config * card_ + state];
  } else {
    auto& row = sparse_[config];
    if (row.empty()) row.assign(card_, 0);
    ++row[state];
  }
  ++total_;
}

std::uint32_t CountTable::njk(std::uint64_t config, int state) const {
  if (dense()) return dense_[config * card_ + state];
  auto it = sparse_.find(config);
  return it == sparse_.end() ? 0 : it->second[state];
}

std::uint32_t CountTable::nk(std::uint64_t config) const {
  std::uint32_t total = 0;
  for (int j = 0; j < card_; ++j) total += njk(config, j);
  return total;
}

CountTable count_statistics(const Dataset& data, int node, ParentSet pset) {
  if (pset.contains(node))
    throw DataError("node cannot appear in its own parent set");
  std::array<int, kMaxNodes> parents{};
  int np = 0;
  pset.for_each([&](int p) { parents[np++] = p; });

  std::uint64_t r = 1;
  for (int j = 0; j < np; ++j) {
    const std::uint64_t card = data.cardinality(parents[j]);
    if (r > std::numeric_limits<std::uint64_t>::max() / card)
      throw CapacityError("parent configuration space overflows 64 bits");
    r *= card;
  }

  CountTable counts(r, data.cardinality(node));
  const std::size_t m = data.rows();
  for (std::size_t t = 0; t < m; ++t) {
    // Lowest-indexed parent is the least significant digit.
    std::uint64_t k = 0, radix = 1;
    for (int j = 0; j < np; ++j) {
      k += radix * data.state(t, parents[j]);
      radix *= data.cardinality(parents[j]);
    }
    counts.tally(k, data.state(t, node));
  }
  return counts;
}

double local_score_from_counts(const CountTable& counts, int pset_size,
                               const Hyperparams& hyper) {
  const double a_cell = hyper.alpha_cell(counts.configs(), counts.child_card());
  if (!(a_cell > 0.0))
    throw UsageError("Dirichlet hyperparameter must be positive");
  const double a_row = a_cell * counts.child_card();
  const double lg_row = log10_gamma(a_row);
  const double lg_cell = log10_gamma(a_cell);
  const int card = counts.child_card();

  double score = pset_size * std::log10(hyper.gamma);
  counts.for_each_active([&](std::uint64_t, const std::uint32_t* row) {
    std::uint32_t n_ik = 0;
    double inner = 0.0;
    for (int j = 0; j < card; ++j) {
      const std::uint32_t c = row[j];
      if (c > 0) {  // zero-count states contribute exactly zero
        inner += log10_gamma(c + a_cell) - lg_cell;
        n_ik += c;
      }
    }
    score += lg_row - log10_gamma(a_row + n_ik) + inner;
  });
  return score;
}

double local_score(int node, ParentSet pset, const Dataset& data,
                   const Hyperparams& hyper) {
  return local_score_from_counts(count_statistics(data, node, pset),
                                 pset.size(), hyper);
}

double ppf(double r_value) {
  if (!(r_value >= 0.0 && r_value <= 1.0))
    throw DataError("prior value outside [0,1]");
  const double d = r_value - 0.5;
  return 100.0 * d * d * d;
}

PpfTable::PpfTable(const PriorMatrix& priors) : n_(priors.n()) {
  w_.assign(static_cast<std::size_t>(n_) * n_, 0.0);
  for (int i = 0; i < n_; ++i)
    for (int m = 0; m < n_; ++m)
      if (i != m) w_[i * n_ + m] = ppf(priors.r(i, m));
}

std::uint64_t ScoreCache::estimate_bytes(int n, int s) {
  return static_cast<std::uint64_t>(n) * bounded_subset_count(n - 1, s) *
         sizeof(double);
}

ScoreCache ScoreCache::build(const Dataset& data, const RunConfig& cfg) {
  cfg.validate();
  const int n = data.n();
  const int s = cfg.max_parents;
  const std::uint64_t bytes = estimate_bytes(n, s);
  if (bytes > cfg.memory_cap_bytes)
    throw CapacityError("score cache estimate " + std::to_string(bytes) +
                        " bytes exceeds cap of " +
                        std::to_string(cfg.memory_cap_bytes));

  ScoreCache cache;
  cache.n_ = n;
  cache.s_ = s;
  cache.hyper_ = Hyperparams{cfg.gamma, cfg.ess, cfg.alpha_mode};
  cache.per_node_ = bounded_subset_count(n - 1, s);
  cache.table_.resize(static_cast<std::size_t>(n) * cache.per_node_);

#pragma omp parallel for num_threads(cfg.workers) schedule(dynamic)
  for (int node = 0; node < n; ++node) {
    std::vector<int> candidates;
    candidates.reserve(n - 1);
    for (int v = 0; v < n; ++v)
      if (v != node) candidates.push_back(v);
    double* row = cache.table_.data() + node * cache.per_node_;
    std::uint64_t g = 0;
    enumerate_bounded_subsets(candidates, s, [&](ParentSet pset) {
      row[g++] = local_score(node, pset, data, cache.hyper_);
    });
  }
  return cache;
}

void ScoreCache::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open cache file for writing: " + path);
  out.write(kCacheMagic, 4);
  const std::uint8_t meta[4] = {kCacheVersion, static_cast<std::uint8_t>(n_),
                                static_cast<std::uint8_t>(s_),
                                static_cast<std::uint8_t>(hyper_.alpha_mode ==
                                                                  AlphaMode::kK2
                                                              ? 1
                                                              : 0)};
  out.write(reinterpret_cast<const char*>(meta), 4);
  put_u64(out, hyper_digest(hyper_));
  for (double v : table_) put_u64(out, std::bit_cast<std::uint64_t>(v));
  if (!out) throw DataError("failed writing cache file: " + path);
}

ScoreCache ScoreCache::load(const std::string& path, const RunConfig& cfg) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open cache file: " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::string_view(magic, 4) != std::string_view(kCacheMagic, 4))
    throw DataError("not a score cache file: " + path);
  std::uint8_t meta[4];
  in.read(reinterpret_cast<char*>(meta), 4);
  if (meta[0] != kCacheVersion)
    throw DataError("unsupported cache version in " + path);

  const Hyperparams hyper{cfg.gamma, cfg.ess, cfg.alpha_mode};
  const std::uint8_t mode = cfg.alpha_mode == AlphaMode::kK2 ? 1 : 0;
  if (meta[2] != cfg.max_parents || meta[3] != mode ||
      get_u64(in) != hyper_digest(hyper))
    throw DataError("cache file " + path +
                    " was built with different scoring parameters");

  ScoreCache cache;
  cache.n_ = meta[1];
  cache.s_ = meta[2];
  cache.hyper_ = hyper;
  cache.per_node_ = bounded_subset_count(cache.n_ - 1, cache.s_);
  cache.table_.resize(static_cast<std::size_t>(cache.n_) * cache.per_node_);
  for (double& v : cache.table_) v = std::bit_cast<double>(get_u64(in));
  if (!in) throw DataError("cache file truncated: " + path);
  return cache;
}

double effective_local_score(int node, ParentSet pset, const ScoreCache& cache,
                             const PriorMatrix& priors) {
  double total = cache.lookup(node, pset);
  pset.for_each([&](int m) { total += ppf(priors.r(node, m)); });
  return total;
}

ScoredGraph score_graph(const Dag& dag, const ScoreCache& cache,
                        const PriorMatrix& priors) {
  if (dag.n() != cache.n())
    throw DataError("graph and cache disagree on node count");
  double total = 0.0;
  for (int i = 0; i < dag.n(); ++i) {
    if (dag.parents(i).size() > cache.s())
      throw DataError("parent set of node " + std::to_string(i) +
                      " exceeds the size limit");
    total += effective_local_score(i, dag.parents(i), cache, priors);
  }
  return {dag, total};
}

ScoredGraph score_order(const Order& order, const ScoreCache& cache,
                        const PriorMatrix& priors) {
  const int n = order.n();
  if (n != cache.n())
    throw DataError("order and cache disagree on node count");
  const PpfTable ppft(priors);

  Dag dag(n);
  std::vector<double> best_by_node(n, 0.0);
  for (int p = 0; p < n; ++p) {
    const int node = order.node_at(p);
    const std::span<const int> preds(order.perm().data(), p);
    double best = -std::numeric_limits<double>::infinity();
    ParentSet best_set;
    enumerate_bounded_subsets(preds, cache.s(), [&](ParentSet pset) {
      const double eff = cache.lookup(node, pset) + ppft.sum(node, pset);
      if (eff > best) {  // strict: first (smallest global index) wins ties
        best = eff;
        best_set = pset;
      }
    });
    dag.set_parents(node, best_set);
    best_by_node[node] = best;
  }

  double total = 0.0;
  for (int i = 0; i < n; ++i) total += best_by_node[i];
  return {std::move(dag), total};
}

}  // namespace bnmc
