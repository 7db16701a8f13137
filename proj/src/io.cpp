#include "bnmc/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace bnmc {

namespace {
std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open " + path + " for writing");
  return out;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

long parse_int(const std::string& s, const std::string& where) {
  long v = 0;
  const char* b = s.data();
  const char* e = b + s.size();
  while (b < e && (*b == ' ' || *b == '\t')) ++b;
  auto [p, ec] = std::from_chars(b, e, v);
  while (p < e && (*p == ' ' || *p == '\t' || *p == '\r')) ++p;
  if (ec != std::errc() || p != e)
    throw DataError(where + ": expected an integer, got '" + s + "'");
  return v;
}

double parse_double(const std::string& s, const std::string& where) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    while (used < s.size() &&
           (s[used] == ' ' || s[used] == '\t' || s[used] == '\r'))
      ++used;
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw DataError(where + ": expected a number, got '" + s + "'");
  }
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}
}  // namespace

std::string format_double(double v) {
  char buf[32];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, p);
}

Dataset read_dataset_csv(const std::string& path) {
  std::ifstream in = open_in(path);
  return read_dataset_csv(in, path);
}

Dataset read_dataset_csv(std::istream& in, const std::string& name) {
  std::string line;
  std::size_t lineno = 0;
  int n = -1;
  std::vector<int> cards;
  std::vector<std::uint8_t> cells;
  bool saw_header = false;

  while (std::getline(in, line)) {
    ++lineno;
    strip_cr(line);
    if (line.empty()) continue;
    const std::string where = name + ":" + std::to_string(lineno);
    if (line[0] == '#') {
      if (line.rfind("#cards:", 0) == 0) {
        for (const std::string& f : split_csv(line.substr(7))) {
          const long c = parse_int(f, where);
          if (c < 2 || c > 256)
            throw DataError(where + ": cardinality out of range [2,256]");
          cards.push_back(static_cast<int>(c));
        }
      }
      continue;
    }
    if (!saw_header) {  // variable-name header row
      n = static_cast<int>(split_csv(line).size());
      saw_header = true;
      continue;
    }
    const auto fields = split_csv(line);
    if (static_cast<int>(fields.size()) != n)
      throw DataError(where + ": expected " + std::to_string(n) +
                      " fields, got " + std::to_string(fields.size()));
    for (const std::string& f : fields) {
      const long v = parse_int(f, where);
      if (v < 0 || v > 255)
        throw DataError(where + ": state out of range [0,255]");
      cells.push_back(static_cast<std::uint8_t>(v));
    }
  }
  if (!saw_header) throw DataError(name + ": missing header row");
  if (!cards.empty() && static_cast<int>(cards.size()) != n)
    throw DataError(name + ": #cards line does not match the column count");

  if (cards.empty()) {
    cards.assign(n, 2);
    const std::size_t rows = cells.size() / n;
    for (std::size_t t = 0; t < rows; ++t)
      for (int i = 0; i < n; ++i)
        cards[i] = std::max(cards[i], static_cast<int>(cells[t * n + i]) + 1);
  }
  return Dataset(std::move(cards), std::move(cells));
}

void write_dataset_csv(const std::string& path, const Dataset& data) {
  std::ofstream out = open_out(path);
  const int n = data.n();
  for (int i = 0; i < n; ++i) out << (i ? ",v" : "v") << i;
  out << "\n#cards: ";
  for (int i = 0; i < n; ++i) out << (i ? "," : "") << data.cardinality(i);
  out << "\n";
  for (std::size_t t = 0; t < data.rows(); ++t) {
    for (int i = 0; i < n; ++i)
      out << (i ? "," : "") << static_cast<int>(data.state(t, i));
    out << "\n";
  }
  if (!out) throw DataError("failed writing " + path);
}

PriorMatrix read_prior_csv(const std::string& path, int expected_n) {
  std::ifstream in = open_in(path);
  std::string line;
  std::size_t lineno = 0;
  std::vector<double> values;
  int rows = 0;
  while (std::getline(in, line)) {
    ++lineno;
    strip_cr(line);
    if (line.empty() || line[0] == '#') continue;
    const std::string where = path + ":" + std::to_string(lineno);
    const auto fields = split_csv(line);
    if (static_cast<int>(fields.size()) != expected_n)
      throw DataError(where + ": prior matrix must have " +
                      std::to_string(expected_n) + " columns");
    for (const std::string& f : fields) values.push_back(parse_double(f, where));
    ++rows;
  }
  if (rows != expected_n)
    throw DataError(path + ": prior matrix must have " +
                    std::to_string(expected_n) + " rows, got " +
                    std::to_string(rows));
  return PriorMatrix(expected_n, std::move(values));
}

void write_prior_csv(const std::string& path, const PriorMatrix& priors) {
  std::ofstream out = open_out(path);
  for (int i = 0; i < priors.n(); ++i) {
    for (int m = 0; m < priors.n(); ++m)
      out << (m ? "," : "") << format_double(priors.r(i, m));
    out << "\n";
  }
  if (!out) throw DataError("failed writing " + path);
}

Dag read_edge_list(const std::string& path, int expected_n) {
  std::ifstream in = open_in(path);
  std::string line;
  std::size_t lineno = 0;
  int n = expected_n;
  std::vector<std::pair<int, int>> edges;  // (child, parent)
  int max_index = -1;
  while (std::getline(in, line)) {
    ++lineno;
    strip_cr(line);
    if (line.empty()) continue;
    const std::string where = path + ":" + std::to_string(lineno);
    if (line[0] == '#') {
      if (line.rfind("# nodes:", 0) == 0 && n == 0)
        n = static_cast<int>(parse_int(line.substr(8), where));
      continue;
    }
    std::istringstream ss(line);
    long child = 0, parent = 0;
    if (!(ss >> child >> parent))
      throw DataError(where + ": expected 'child parent'");
    std::string rest;
    if (ss >> rest) throw DataError(where + ": trailing fields");
    if (child < 0 || parent < 0 || child == parent)
      throw DataError(where + ": invalid edge");
    edges.emplace_back(static_cast<int>(child), static_cast<int>(parent));
    max_index = std::max(max_index, static_cast<int>(std::max(child, parent)));
  }
  if (n == 0) n = max_index + 1;
  if (max_index >= n)
    throw DataError(path + ": edge refers to node " +
                    std::to_string(max_index) + " but n is " +
                    std::to_string(n));
  Dag dag(n);
  for (auto [child, parent] : edges) dag.add_edge(parent, child);
  return dag;
}

void write_edge_list(const std::string& path, const Dag& dag) {
  std::ofstream out = open_out(path);
  out << "# nodes: " << dag.n() << "\n";
  out << "# child parent\n";
  for (int child = 0; child < dag.n(); ++child)
    dag.parents(child).for_each(
        [&](int parent) { out << child << " " << parent << "\n"; });
  if (!out) throw DataError("failed writing " + path);
}

void write_cpts(const std::string& path, const GroundTruthBn& bn) {
  std::ofstream out = open_out(path);
  for (int i = 0; i < bn.dag.n(); ++i) {
    out << "node " << i << " card " << bn.cardinalities[i] << " parents";
    bn.dag.parents(i).for_each([&](int p) { out << " " << p; });
    out << "\n";
    const int card = bn.cardinalities[i];
    const std::uint64_t r = bn.config_count(i);
    for (std::uint64_t k = 0; k < r; ++k) {
      for (int j = 0; j < card; ++j)
        out << (j ? " " : "") << format_double(bn.cpts[i][k * card + j]);
      out << "\n";
    }
  }
  if (!out) throw DataError("failed writing " + path);
}

void write_trace_csv(const std::string& path,
                     const std::vector<TraceRow>& trace) {
  std::ofstream out = open_out(path);
  out << "iteration,proposed_score,accepted,best_score\n";
  for (const TraceRow& row : trace)
    out << row.iteration << "," << format_double(row.proposed_score) << ","
        << (row.accepted ? 1 : 0) << "," << format_double(row.best_score)
        << "\n";
  if (!out) throw DataError("failed writing " + path);
}

void write_summary(const std::string& path, const RunConfig& cfg,
                   const McmcResult& result) {
  std::ofstream out = open_out(path);
  const ScoredGraph& best = result.tracker.best();
  out << "seed: " << cfg.seed << "\n";
  out << "nodes: " << best.dag.n() << "\n";
  out << "iterations: " << cfg.iterations << "\n";
  out << "max_parents: " << cfg.max_parents << "\n";
  out << "gamma: " << format_double(cfg.gamma) << "\n";
  out << "ess: " << format_double(cfg.ess) << "\n";
  out << "alpha_mode: " << (cfg.alpha_mode == AlphaMode::kK2 ? "k2" : "bdeu")
      << "\n";
  out << "workers: " << cfg.workers << "\n";
  out << "track_top: " << cfg.track_top << "\n";
  out << "accepted: " << result.accepted << "\n";
  out << "acceptance_rate: "
      << format_double(static_cast<double>(result.accepted) /
                       static_cast<double>(cfg.iterations))
      << "\n";
  out << "best_score: " << format_double(best.total) << "\n";
  out << "best_edges: " << best.dag.edge_count() << "\n";
  out << "best_graph:\n";
  for (int child = 0; child < best.dag.n(); ++child)
    best.dag.parents(child).for_each(
        [&](int parent) { out << child << " " << parent << "\n"; });
  out << "# preprocess_seconds: " << result.preprocess_seconds << "\n";
  out << "# sampling_seconds: " << result.sampling_seconds << "\n";
  if (!out) throw DataError("failed writing " + path);
}

}  // namespace bnmc
