#pragma once

#include <cstdint>
#include <vector>

#include "disco/engine.hpp"
#include "disco/exact.hpp"

namespace disco {

// Raw (uncapped) emission probability for one co-occurrence of the pair, given
// the p/eps oversampling parameter and the background counts:
//   cosine   p/eps * 1/sqrt(cx*cy)
//   overlap  p/eps * 1/min(cx, cy)
//   dice     p/eps * 2/(cx+cy)
// Values >= 1 mean the deterministic regime (every instance is kept). Jaccard
// has no per-pair sampler (it goes through min-hashing) and is rejected, as
// are unseen words (cx or cy == 0).
double emit_probability(Measure m, double p_over_eps, std::uint64_t cx,
                        std::uint64_t cy);

// Recommended oversampling for a D-word dictionary and target error eps:
// 2*ln(D)/eps keeps per-pair estimates concentrated. Requires D >= 2 and
// eps in (0, 1].
double default_p_over_eps(std::uint32_t dict_size, double eps);

// Turns a reduce-key count back into a similarity estimate. In the sampling
// regime (raw q < 1) the count is unbiased after dividing by p/eps; once q
// saturates the count equals the true co-occurrence count and the exact
// score is returned, sharing exact_score's float path with the oracle.
double disco_estimate(Measure m, double p_over_eps, std::uint64_t key_count,
                      std::uint64_t cx, std::uint64_t cy);

struct DiscoRun {
  std::vector<PairScore> estimates;  // in score_order
  JobMetrics metrics;
};

// Shuffle cost of the naive exact job: one emission per co-occurrence, i.e.
// sum over docs of C(|d|, 2).
std::uint64_t naive_shuffle_size(const Corpus& corpus);

// Exact all-pairs job: mappers emit every co-occurrence, reducers count and
// score. Output equals oracle_all_pairs(corpus, m, 0+). Works for all four
// measures since reducers see complete counts.
DiscoRun naive_pipeline(const Corpus& corpus, Measure m, const JobOptions& opts = {});

// Sampled all-pairs job: each co-occurrence of (x, y) is emitted with
// probability min(1, emit_probability(...)); reducers rescale. Cosine,
// Overlap and Dice only.
DiscoRun disco_pipeline(const Corpus& corpus, Measure m, double p_over_eps,
                        const JobOptions& opts = {});

// Adds explicit zero-estimate rows for truth pairs the sample missed, keeping
// score_order. `truth` must be deduplicated.
void materialize_zeros(std::vector<PairScore>& estimates,
                       const std::vector<PairScore>& truth);

}  // namespace disco
