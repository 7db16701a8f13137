// bnmc: structure learning for discrete Bayesian networks by order-space
// MCMC. Subcommands: generate, learn, eval, bench.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numeric>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bnmc/engine.hpp"
#include "bnmc/evalgen.hpp"
#include "bnmc/io.hpp"
#include "bnmc/sampler.hpp"

namespace {

using namespace bnmc;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

std::vector<int> parse_int_list(const std::string& csv,
                                const std::string& flag) {
  std::vector<int> out;
  std::string field;
  std::istringstream ss(csv);
  while (std::getline(ss, field, ',')) {
    try {
      out.push_back(std::stoi(field));
    } catch (const std::exception&) {
      throw UsageError(flag + ": expected a comma-separated integer list");
    }
  }
  if (out.empty()) throw UsageError(flag + ": empty list");
  return out;
}

struct GenerateOpts {
  int nodes = 0;
  long samples = 0;
  std::uint64_t seed = 0;
  int max_parents = 4;
  double edge_prob = 0.3;
  int cards = 2;
  double concentration = 1.0;
  double noise = -1.0;
  std::string out_prefix;
};

int run_generate(const GenerateOpts& o) {
  if (o.nodes < 1 || o.nodes > kMaxNodes)
    throw UsageError("--nodes must lie in [1,64]");
  if (o.samples < 1) throw UsageError("--samples must be >= 1");
  if (o.cards < 2 || o.cards > 256)
    throw UsageError("--cards must lie in [2,256]");
  if (!(o.edge_prob >= 0.0 && o.edge_prob <= 1.0))
    throw UsageError("--edge-prob must lie in [0,1]");

  const Rng master(o.seed);
  Rng dag_rng = master.split(101);
  Rng cpt_rng = master.split(102);
  Rng sample_rng = master.split(103);

  const Dag truth = random_dag(o.nodes, o.max_parents, o.edge_prob, dag_rng);
  const std::vector<int> cards(o.nodes, o.cards);
  const GroundTruthBn bn =
      random_ground_truth(truth, cards, o.concentration, cpt_rng);
  const Dataset data = forward_sample(bn, o.samples, sample_rng);

  write_edge_list(o.out_prefix + ".truth.edges", truth);
  write_cpts(o.out_prefix + ".cpt", bn);
  write_dataset_csv(o.out_prefix + ".data.csv", data);
  std::cout << "wrote " << o.out_prefix << ".truth.edges, .cpt, .data.csv ("
            << truth.edge_count() << " edges, " << o.samples << " rows)\n";

  if (o.noise >= 0.0) {
    Rng noise_rng = master.split(104);
    write_dataset_csv(o.out_prefix + ".noisy.csv",
                      inject_noise(data, o.noise, noise_rng));
    std::cout << "wrote " << o.out_prefix << ".noisy.csv (p=" << o.noise
              << ")\n";
  }
  return 0;
}

struct LearnOpts {
  std::string data_path;
  std::string priors_path;
  std::string out_prefix;
  std::string save_cache;
  std::string load_cache;
  RunConfig cfg;
};

int run_learn(LearnOpts& o) {
  o.cfg.validate();
  const Dataset data = read_dataset_csv(o.data_path);
  if (data.rows() == 0) throw DataError(o.data_path + ": no data rows");
  const PriorMatrix priors = o.priors_path.empty()
                                 ? PriorMatrix::neutral(data.n())
                                 : read_prior_csv(o.priors_path, data.n());

  ScoreCache loaded;
  const ScoreCache* prebuilt = nullptr;
  if (!o.load_cache.empty()) {
    loaded = ScoreCache::load(o.load_cache, o.cfg);
    if (loaded.n() != data.n())
      throw DataError(o.load_cache + ": cache node count " +
                      std::to_string(loaded.n()) + " != dataset " +
                      std::to_string(data.n()));
    prebuilt = &loaded;
  }

  const McmcResult result = run_mcmc(data, o.cfg, priors, prebuilt);
  write_summary(o.out_prefix + ".summary.txt", o.cfg, result);
  write_trace_csv(o.out_prefix + ".trace.csv", result.trace);
  write_edge_list(o.out_prefix + ".best.edges", result.tracker.best().dag);
  if (!o.save_cache.empty() && prebuilt == nullptr) {
    // Rebuild is avoided: run_mcmc owns its cache, so recompute only here.
    ScoreCache::build(data, o.cfg).save(o.save_cache);
  }

  std::cout << "best_score: " << format_double(result.tracker.best_score())
            << "\n"
            << "best_edges: " << result.tracker.best().dag.edge_count() << "\n"
            << "acceptance_rate: "
            << static_cast<double>(result.accepted) / o.cfg.iterations << "\n"
            << "preprocess_seconds: " << result.preprocess_seconds << "\n"
            << "sampling_seconds: " << result.sampling_seconds << "\n"
            << "outputs: " << o.out_prefix << ".summary.txt, .trace.csv,"
            << " .best.edges\n";
  return 0;
}

struct EvalOpts {
  std::string learned_path;
  std::string truth_path;
  std::string data_path;
  std::string out_path;
  int nodes = 0;
  bool sweep = false;
  RunConfig cfg;
};

void emit_metrics_row(std::ostream& out, const std::string& label,
                      double hi, double lo, double fraction,
                      const ConfusionCounts& c, double best_score) {
  out << label << "," << format_double(hi) << "," << format_double(lo) << ","
      << format_double(fraction) << "," << c.tp << "," << c.fp << "," << c.fn
      << "," << c.tn << "," << format_double(c.tp_rate()) << ","
      << format_double(c.fp_rate()) << "," << format_double(c.f1()) << ","
      << format_double(best_score) << "\n";
}

int run_eval(EvalOpts& o) {
  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!o.out_path.empty()) {
    file.open(o.out_path);
    if (!file) throw DataError("cannot open " + o.out_path + " for writing");
    out = &file;
  }
  *out << "label,prior_hi,prior_lo,fraction,tp,fp,fn,tn,tp_rate,fp_rate,f1,"
          "best_score\n";

  const Dag truth = read_edge_list(o.truth_path, o.nodes);
  if (!o.sweep) {
    if (o.learned_path.empty())
      throw UsageError("--learned is required without --sweep");
    const Dag learned = read_edge_list(o.learned_path, truth.n());
    emit_metrics_row(*out, "eval", 0.5, 0.5, 0.0, confusion(learned, truth),
                     0.0);
    return 0;
  }

  // Prior-perturbation sweep: a no-prior baseline run, then four prior
  // configurations of increasing strength targeted at the baseline's errors.
  if (o.data_path.empty()) throw UsageError("--sweep requires --data");
  const Dataset data = read_dataset_csv(o.data_path);
  if (truth.n() != data.n())
    throw DataError("truth graph and dataset disagree on node count");
  o.cfg.validate();

  const ScoreCache cache = ScoreCache::build(data, o.cfg);
  const McmcResult baseline =
      run_mcmc(data, o.cfg, PriorMatrix::neutral(data.n()), &cache);
  const Dag& base_dag = baseline.tracker.best().dag;
  emit_metrics_row(*out, "baseline", 0.5, 0.5, 0.0, confusion(base_dag, truth),
                   baseline.tracker.best_score());

  const std::pair<double, double> pairs[2] = {{0.7, 0.2}, {0.8, 0.1}};
  const double fractions[2] = {0.2, 0.4};
  const Rng master(o.cfg.seed);
  int config_index = 0;
  for (const auto& pr : pairs) {
    for (const double fraction : fractions) {
      Rng protocol_rng = master.split(201 + config_index++);
      const PriorMatrix priors = prior_perturbation_protocol(
          truth, base_dag, pr, fraction, protocol_rng);
      const McmcResult run = run_mcmc(data, o.cfg, priors, &cache);
      emit_metrics_row(*out, "priors", pr.first, pr.second, fraction,
                       confusion(run.tracker.best().dag, truth),
                       run.tracker.best_score());
    }
  }
  return 0;
}

struct BenchOpts {
  std::string scaling_nodes = "13,20";
  std::string workers_list = "1,2,4,8";
  long samples = 200;
  int reps = 20;
  int enum_candidates = 0;
  std::uint64_t seed = 1;
  int max_parents = 4;
  std::string out_path;
};

Dataset synth_dataset(int n, long samples, int max_parents, std::uint64_t seed) {
  const Rng master(seed);
  Rng dag_rng = master.split(101);
  Rng cpt_rng = master.split(102);
  Rng sample_rng = master.split(103);
  const Dag truth = random_dag(n, max_parents, 0.25, dag_rng);
  const GroundTruthBn bn =
      random_ground_truth(truth, std::vector<int>(n, 2), 1.0, cpt_rng);
  return forward_sample(bn, samples, sample_rng);
}

int run_bench(const BenchOpts& o) {
  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!o.out_path.empty()) {
    file.open(o.out_path);
    if (!file) throw DataError("cannot open " + o.out_path + " for writing");
    out = &file;
  }
  *out << "phase,nodes,workers,candidates,reps,seconds,speedup\n";

  RunConfig cfg;
  cfg.max_parents = o.max_parents;
  cfg.seed = o.seed;

  if (!o.scaling_nodes.empty()) {
    for (int n : parse_int_list(o.scaling_nodes, "--scaling-nodes")) {
      if (n < 2 || n > kMaxNodes)
        throw UsageError("--scaling-nodes entries must lie in [2,64]");
      const Dataset data = synth_dataset(n, o.samples, o.max_parents, o.seed);
      cfg.workers = 1;
      const auto t_pre = std::chrono::steady_clock::now();
      const ScoreCache cache = ScoreCache::build(data, cfg);
      *out << "preprocess," << n << ",1,," << 1 << ","
           << format_double(seconds_since(t_pre)) << ",\n";

      // The same random orders are scored at every worker count.
      Rng order_rng = Rng(o.seed).split(7);
      std::vector<Order> orders;
      for (int r = 0; r < o.reps; ++r) {
        std::vector<int> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        shuffle(perm, order_rng);
        orders.emplace_back(std::move(perm));
      }

      const PriorMatrix neutral = PriorMatrix::neutral(n);

      // serial reference implementation, for comparison with the engine
      {
        score_order(orders[0], cache, neutral);  // warm-up
        const auto t0 = std::chrono::steady_clock::now();
        for (const Order& order : orders) score_order(order, cache, neutral);
        *out << "serial_reference," << n << ",1,," << o.reps << ","
             << format_double(seconds_since(t0) / o.reps) << ",\n";
      }

      double serial_seconds = 0.0;
      for (int w : parse_int_list(o.workers_list, "--workers-list")) {
        if (w < 1) throw UsageError("--workers-list entries must be >= 1");
        EngineConfig ecfg;
        ecfg.workers = w;
        const OrderScorer scorer(cache, neutral, ecfg);
        scorer.score(orders[0]);  // warm-up
        const auto t0 = std::chrono::steady_clock::now();
        for (const Order& order : orders) scorer.score(order);
        const double per_iter = seconds_since(t0) / o.reps;
        if (w == 1) serial_seconds = per_iter;
        *out << "iteration," << n << "," << w << ",," << o.reps << ","
             << format_double(per_iter) << ","
             << (serial_seconds > 0.0
                     ? format_double(serial_seconds / per_iter)
                     : "")
             << "\n";
      }
    }
  }

  if (o.enum_candidates > 0) {
    const int c = o.enum_candidates;
    if (c > 30) throw UsageError("--enum-candidates above 30 is impractical");
    // One node with c candidate parents: the last node of an identity order
    // over c+1 nodes.
    const Dataset data = synth_dataset(c + 1, o.samples, o.max_parents, o.seed);
    cfg.workers = 1;
    const ScoreCache cache = ScoreCache::build(data, cfg);
    const PriorMatrix neutral = PriorMatrix::neutral(c + 1);
    const Order order = Order::identity(c + 1);

    EngineConfig ecfg;
    const OrderScorer scorer(cache, neutral, ecfg);
    const WorkSlice full_range{c, c, 0, bounded_subset_count(c, cfg.max_parents)};

    const int bounded_reps = 200;
    ArgmaxCell cell;
    const auto t_bounded = std::chrono::steady_clock::now();
    for (int r = 0; r < bounded_reps; ++r)
      cell = scorer.scan_slice(full_range, order);
    const double bounded_s = seconds_since(t_bounded) / bounded_reps;

    const auto t_full = std::chrono::steady_clock::now();
    const auto [full_best, full_set] =
        full_bitvector_scan(c, order, cache, neutral);
    const double full_s = seconds_since(t_full);
    if (full_best != cell.score)
      throw Error("enumeration benchmark: strategies disagree on the best "
                  "score");

    *out << "enum_full,,1," << c << ",1," << format_double(full_s) << ",\n";
    *out << "enum_bounded,,1," << c << "," << bounded_reps << ","
         << format_double(bounded_s) << ","
         << format_double(full_s / bounded_s) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian network structure learning by order-space MCMC"};
  app.require_subcommand(1);

  GenerateOpts gen;
  CLI::App* generate =
      app.add_subcommand("generate", "Sample a ground-truth network and data");
  generate->add_option("--nodes", gen.nodes, "Node count")->required();
  generate->add_option("--samples", gen.samples, "Rows to sample")->required();
  generate->add_option("--seed", gen.seed, "RNG seed");
  generate->add_option("--max-parents", gen.max_parents, "In-degree cap");
  generate->add_option("--edge-prob", gen.edge_prob, "Backward edge density");
  generate->add_option("--cards", gen.cards, "States per variable");
  generate->add_option("--concentration", gen.concentration,
                       "Dirichlet concentration for CPT rows");
  generate->add_option("--noise", gen.noise,
                       "Also write a noisy copy with this flip probability");
  generate->add_option("--out-prefix", gen.out_prefix, "Output file prefix")
      ->required();

  LearnOpts learn;
  CLI::App* learn_cmd =
      app.add_subcommand("learn", "Learn a structure from a dataset CSV");
  learn_cmd->add_option("--data", learn.data_path, "Dataset CSV")->required();
  learn_cmd->add_option("--priors", learn.priors_path,
                        "Pairwise prior matrix CSV (n x n in [0,1])");
  learn_cmd->add_option("--iterations", learn.cfg.iterations, "MCMC steps");
  learn_cmd->add_option("--max-parents", learn.cfg.max_parents,
                        "Parent set size limit s");
  learn_cmd->add_option("--gamma", learn.cfg.gamma, "Structure penalty");
  learn_cmd->add_option("--ess", learn.cfg.ess, "Equivalent sample size");
  learn_cmd->add_option("--seed", learn.cfg.seed, "RNG seed");
  learn_cmd->add_option("--workers", learn.cfg.workers, "Worker count");
  learn_cmd->add_option("--track-top", learn.cfg.track_top,
                        "Best graphs retained");
  learn_cmd->add_option("--tasks-per-node", learn.cfg.tasks_per_node,
                        "Work slices per node (0 = workers)");
  learn_cmd->add_option("--memory-cap", learn.cfg.memory_cap_bytes,
                        "Score cache size cap in bytes");
  learn_cmd->add_flag("--strict-paper-tracker", learn.cfg.strict_paper_tracker,
                      "Track best graphs only on accepted orders");
  auto* pst_flag =
      learn_cmd->add_flag("--pst", "Use the parent set table (default)");
  auto* unrank_flag =
      learn_cmd
          ->add_flag("--unrank", "Recover parent sets by unranking instead")
          ->excludes(pst_flag);
  bool k2 = false;
  learn_cmd->add_flag("--k2", k2, "K2 hyperparameters (alpha_ijk = 1)");
  learn_cmd->add_option("--save-cache", learn.save_cache,
                        "Also persist the score cache here");
  learn_cmd->add_option("--load-cache", learn.load_cache,
                        "Reuse a persisted score cache");
  learn_cmd->add_option("--out-prefix", learn.out_prefix, "Output file prefix")
      ->required();

  EvalOpts eval;
  CLI::App* eval_cmd = app.add_subcommand(
      "eval", "Compare a learned graph against ground truth");
  eval_cmd->add_option("--learned", eval.learned_path, "Learned edge list");
  eval_cmd->add_option("--truth", eval.truth_path, "Ground-truth edge list")
      ->required();
  eval_cmd->add_option("--nodes", eval.nodes, "Node count override");
  eval_cmd->add_option("--out", eval.out_path, "Metrics CSV (default stdout)");
  eval_cmd->add_flag("--sweep", eval.sweep,
                     "Run the prior-perturbation sweep (requires --data)");
  eval_cmd->add_option("--data", eval.data_path, "Dataset CSV for --sweep");
  eval_cmd->add_option("--iterations", eval.cfg.iterations, "MCMC steps");
  eval_cmd->add_option("--max-parents", eval.cfg.max_parents,
                       "Parent set size limit s");
  eval_cmd->add_option("--gamma", eval.cfg.gamma, "Structure penalty");
  eval_cmd->add_option("--ess", eval.cfg.ess, "Equivalent sample size");
  eval_cmd->add_option("--seed", eval.cfg.seed, "RNG seed");
  eval_cmd->add_option("--workers", eval.cfg.workers, "Worker count");
  eval_cmd->add_option("--track-top", eval.cfg.track_top,
                       "Best graphs retained");

  BenchOpts bench;
  CLI::App* bench_cmd =
      app.add_subcommand("bench", "Scoring and enumeration benchmarks");
  bench_cmd->add_option("--scaling-nodes", bench.scaling_nodes,
                        "Node counts to time (comma list; empty to skip)");
  bench_cmd->add_option("--workers-list", bench.workers_list,
                        "Worker counts to time");
  bench_cmd->add_option("--samples", bench.samples, "Synthetic dataset rows");
  bench_cmd->add_option("--reps", bench.reps, "Orders scored per timing");
  bench_cmd->add_option("--enum-candidates", bench.enum_candidates,
                        "Candidate count for bounded-vs-full enumeration");
  bench_cmd->add_option("--seed", bench.seed, "RNG seed");
  bench_cmd->add_option("--max-parents", bench.max_parents,
                        "Parent set size limit s");
  bench_cmd->add_option("--out", bench.out_path, "Timing CSV (default stdout)");

  try {
    app.parse(argc, argv);
    if (*learn_cmd) {
      if (k2) learn.cfg.alpha_mode = AlphaMode::kK2;
      if (unrank_flag->count() > 0) learn.cfg.use_pst = false;
      return run_learn(learn);
    }
    if (*generate) return run_generate(gen);
    if (*eval_cmd) return run_eval(eval);
    if (*bench_cmd) return run_bench(bench);
    return 2;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const CapacityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
