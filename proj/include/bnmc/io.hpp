#ifndef BNMC_IO_HPP
#define BNMC_IO_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "bnmc/evalgen.hpp"
#include "bnmc/sampler.hpp"
#include "bnmc/types.hpp"

namespace bnmc {

// Dataset CSV: a header row of variable names, then one row of integer
// states per sample. Lines starting with '#' are comments; an optional
// "#cards: c0,c1,..." comment pins the cardinalities (the writer always
// emits it). Without it, cardinalities are inferred as max state + 1, with
// a floor of 2.
Dataset read_dataset_csv(const std::string& path);
Dataset read_dataset_csv(std::istream& in, const std::string& name);
void write_dataset_csv(const std::string& path, const Dataset& data);

// Prior matrix CSV: n rows of n comma-separated decimals in [0,1].
PriorMatrix read_prior_csv(const std::string& path, int expected_n);
void write_prior_csv(const std::string& path, const PriorMatrix& priors);

// Edge list: "child parent" per line, 0-based, '#' comments allowed. The
// writer emits "# nodes: n" so isolated nodes survive a round trip.
Dag read_edge_list(const std::string& path, int expected_n = 0);
void write_edge_list(const std::string& path, const Dag& dag);

// CPT text dump for generated ground truths (one block per node).
void write_cpts(const std::string& path, const GroundTruthBn& bn);

// Trace CSV: iteration,proposed_score,accepted,best_score.
void write_trace_csv(const std::string& path,
                     const std::vector<TraceRow>& trace);

// Run summary: deterministic "key: value" lines reproducible from the same
// seed and config; wall-clock timings are emitted as '#' comment lines and
// excluded from the reproducibility contract.
void write_summary(const std::string& path, const RunConfig& cfg,
                   const McmcResult& result);

std::string format_double(double v);  // round-trip exact

}  // namespace bnmc

#endif
