#pragma once

#include <functional>
#include <string>
#include <vector>

#include "penlmc/config.hpp"
#include "penlmc/metrics.hpp"

namespace penlmc {

struct MetricsRow {
  std::string algo;
  std::uint64_t seed = 0;
  int n = 0;
  int N = 0;
  double h = 0.0;
  double lambda = 0.0;
  double w1 = 0.0;
  double w2 = 0.0;
  std::uint64_t grad_evals = 0;
  double wall_ms = 0.0;  // chain-running time only
};

struct AlgoSeedResult {
  MetricsRow row;
  EmpiricalMeasure finals;
};

struct ExperimentReport {
  RunConfig config;
  std::vector<AlgoSeedResult> results;
};

// Called after each (algorithm, seed) cell completes, so partial results can
// be flushed before a later failure.
using RowSink = std::function<void(const AlgoSeedResult&)>;

// Runs the configured grid: for each (algorithm, seed), `samples`
// independent chains of n steps from the potential minimizer with the
// inside-K step scaling, then W1/W2 against rejection-sampled ground truth
// (exact assignment for N <= 2000, sliced above). Ground truth depends on
// the seed only, so algorithms are compared on common truth clouds.
ExperimentReport run_experiment(const RunConfig& cfg,
                                const RowSink& sink = {},
                                bool compute_metrics = true);

struct RatesReport {
  std::vector<double> lambdas;
  std::vector<double> w_p1_q1;  // W_1, dimension 1
  std::vector<double> w_p2_q3;  // W_3, dimension 2
  double slope_p1_q1 = 0.0;
  double slope_p2_q3 = 0.0;
  double ratio_min = 0.0;  // min over grid of W_1/lambda
  double ratio_max = 0.0;
};

// Surrogate-vs-target approximation rates on the Gaussian-on-ball family
// (r = 0.5, Euclidean penalty) over lambda = 2^{-3} .. 2^{-8}.
RatesReport validate_rates();

}  // namespace penlmc
