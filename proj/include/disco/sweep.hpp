#pragma once

#include <cstdint>
#include <vector>

#include "disco/disco.hpp"
#include "disco/exact.hpp"

namespace disco {

// Grid of sampled runs: every p/eps value is run once per seed and the rows
// report seed-averaged statistics against the exact truth.
struct ExperimentConfig {
  Measure measure = Measure::Cosine;
  std::vector<double> p_over_eps;  // non-empty, positive
  std::vector<double> eps_grid;    // thresholds in (0, 1]; may be empty
  std::vector<std::uint64_t> seeds;  // non-empty
  unsigned threads = 1;
};

struct SweepRow {
  double p_over_eps = 0.0;
  double shuffle_size = 0.0;     // mean emissions per run
  double shuffle_ratio = 0.0;    // mean emissions / naive shuffle size
  double mean_rel_error = 0.0;   // over pairs with truth > 0; misses count as 1
  // mean relative error restricted to pairs with truth >= eps_grid[i]
  std::vector<double> threshold_error;
};

// Relative-error summary of one run: estimates and truth must both be sorted
// by ascending pair (a merge join). Truth pairs absent from the estimates
// count as relative error 1.
struct ErrorSummary {
  double mean_rel_error = 0.0;
  std::vector<double> threshold_error;
};
ErrorSummary relative_errors(const std::vector<PairScore>& estimates_by_pair,
                             const std::vector<PairScore>& truth_by_pair,
                             const std::vector<double>& eps_grid);

// Ascending-pair copy, for joining.
std::vector<PairScore> sorted_by_pair(std::vector<PairScore> scores);

std::vector<SweepRow> run_sweep(const Corpus& corpus, const ExperimentConfig& config);

}  // namespace disco
