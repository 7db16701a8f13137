#ifndef BNMC_EVALGEN_HPP
#define BNMC_EVALGEN_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <utility>
#include <vector>

#include "bnmc/rng.hpp"
#include "bnmc/types.hpp"

namespace bnmc {

using BigInt = boost::multiprecision::cpp_int;

// A fully parameterized discrete Bayesian network. cpts[i] holds r_i rows of
// cardinality[i] probabilities, row-major by parent configuration (lowest
// parent index = least significant digit, matching count_statistics).
struct GroundTruthBn {
  Dag dag;
  std::vector<int> cardinalities;
  std::vector<std::vector<double>> cpts;

  std::uint64_t config_count(int node) const;  // r_i
  void validate() const;                       // rows sum to 1 within 1e-9
};

// Acyclic by construction: edges point backward along a random permutation,
// each admitted with edge_prob until max_parents is reached.
Dag random_dag(int n, int max_parents, double edge_prob, Rng& rng);

// CPT rows drawn from a symmetric Dirichlet with the given concentration
// (1.0 = uniform over the simplex).
GroundTruthBn random_ground_truth(const Dag& dag,
                                  const std::vector<int>& cardinalities,
                                  double concentration, Rng& rng);

Dataset forward_sample(const GroundTruthBn& bn, std::size_t rows, Rng& rng);

// Each cell independently flips with probability p: binary states toggle,
// multi-valued states move to a uniformly random different state.
Dataset inject_noise(const Dataset& data, double p, Rng& rng);

struct ConfusionCounts {
  std::uint64_t tp = 0, fp = 0, fn = 0, tn = 0;

  double tp_rate() const { return tp + fn == 0 ? 0.0 : double(tp) / (tp + fn); }
  double fp_rate() const { return fp + tn == 0 ? 0.0 : double(fp) / (fp + tn); }
  double f1() const {
    return 2 * tp + fp + fn == 0 ? 0.0 : 2.0 * tp / (2.0 * tp + fp + fn);
  }
};

// Directed-edge comparison over all n(n-1) ordered pairs.
ConfusionCounts confusion(const Dag& learned, const Dag& truth);

// The prior-perturbation protocol: edges falsely removed by the baseline get
// belief strengths.first, falsely added edges get strengths.second, each
// independently with the given probability; everything else stays 0.5.
PriorMatrix prior_perturbation_protocol(const Dag& truth, const Dag& baseline,
                                        std::pair<double, double> strengths,
                                        double fraction, Rng& rng);

// Labeled-DAG count by the inclusion-exclusion recurrence
// a(n) = sum_{k=1..n} (-1)^(k+1) C(n,k) 2^(k(n-k)) a(n-k). Exact for n <= 20.
BigInt count_dags(int n);

// n!, exact for n <= 20.
std::uint64_t count_orders(int n);

}  // namespace bnmc

#endif
