#include "disco/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace disco {

std::vector<PairScore> sorted_by_pair(std::vector<PairScore> scores) {
  std::sort(scores.begin(), scores.end(),
            [](const PairScore& a, const PairScore& b) { return a.pair < b.pair; });
  return scores;
}

ErrorSummary relative_errors(const std::vector<PairScore>& estimates_by_pair,
                             const std::vector<PairScore>& truth_by_pair,
                             const std::vector<double>& eps_grid) {
  ErrorSummary out;
  std::vector<double> sums(eps_grid.size() + 1, 0.0);
  std::vector<std::uint64_t> counts(eps_grid.size() + 1, 0);

  std::size_t e = 0;
  for (const PairScore& t : truth_by_pair) {
    if (!(t.score > 0.0)) continue;
    while (e < estimates_by_pair.size() && estimates_by_pair[e].pair < t.pair) ++e;
    double est = 0.0;
    if (e < estimates_by_pair.size() && estimates_by_pair[e].pair == t.pair)
      est = estimates_by_pair[e].score;
    double rel = std::abs(est - t.score) / t.score;
    sums[0] += rel;
    counts[0]++;
    for (std::size_t g = 0; g < eps_grid.size(); ++g) {
      if (t.score >= eps_grid[g]) {
        sums[g + 1] += rel;
        counts[g + 1]++;
      }
    }
  }
  out.mean_rel_error = counts[0] ? sums[0] / double(counts[0]) : 0.0;
  out.threshold_error.resize(eps_grid.size());
  for (std::size_t g = 0; g < eps_grid.size(); ++g)
    out.threshold_error[g] = counts[g + 1] ? sums[g + 1] / double(counts[g + 1]) : 0.0;
  return out;
}

std::vector<SweepRow> run_sweep(const Corpus& corpus, const ExperimentConfig& config) {
  if (config.p_over_eps.empty()) throw std::invalid_argument("empty p/eps sweep");
  if (config.seeds.empty()) throw std::invalid_argument("empty seed list");
  for (double r : config.p_over_eps)
    if (!(r > 0.0)) throw std::invalid_argument("p/eps values must be positive");
  for (double eps : config.eps_grid)
    if (!(eps > 0.0) || eps > 1.0)
      throw std::invalid_argument("eps grid values must be in (0, 1]");

  const double naive = double(naive_shuffle_size(corpus));
  const auto truth = sorted_by_pair(oracle_all_pairs(corpus, config.measure, 0.0));

  std::vector<SweepRow> rows;
  for (double r : config.p_over_eps) {
    SweepRow row;
    row.p_over_eps = r;
    row.threshold_error.assign(config.eps_grid.size(), 0.0);
    for (std::uint64_t seed : config.seeds) {
      JobOptions opts;
      opts.seed = seed;
      opts.threads = config.threads;
      DiscoRun run = disco_pipeline(corpus, config.measure, r, opts);
      auto err = relative_errors(sorted_by_pair(std::move(run.estimates)), truth,
                                 config.eps_grid);
      row.shuffle_size += double(run.metrics.shuffle_size);
      row.mean_rel_error += err.mean_rel_error;
      for (std::size_t g = 0; g < config.eps_grid.size(); ++g)
        row.threshold_error[g] += err.threshold_error[g];
    }
    double n = double(config.seeds.size());
    row.shuffle_size /= n;
    row.mean_rel_error /= n;
    for (double& t : row.threshold_error) t /= n;
    row.shuffle_ratio = naive > 0.0 ? row.shuffle_size / naive : 0.0;
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace disco
