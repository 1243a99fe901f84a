#pragma once

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "disco/engine.hpp"
#include "disco/exact.hpp"

namespace disco {

// Single-pass sketch answering pairwise-similarity queries at any point in a
// document stream. For every co-occurrence that survives a coin flip the
// sketch stores the (clamped) probability it was kept with; a query then
// subsamples each survivor down to the current target probability, which makes
// the composite keep-probability exactly the target no matter when the
// insertion happened. Queries are read-only.
class StreamState {
 public:
  StreamState(Measure m, double p_over_eps, std::uint64_t seed);

  // Feeds one document (a set of distinct word ids; sorted or not). Counters
  // update first so the emission probability sees the counts including this
  // document.
  void update(std::span<const WordId> words);

  // Similarity estimate for (x, y) given everything streamed so far. Fresh
  // randomness comes from query_seed only, so the call neither disturbs the
  // sketch nor future queries. Requires both words seen; x == y returns 1.
  // When the current target probability reaches 1 the stored survivors are
  // complete and the exact score is returned.
  double query(WordId x, WordId y, std::uint64_t query_seed) const;

  // Bag entries plus live word counters: the footprint that the memory bound
  // (p/eps) * L * D * (floor(lg N) + 1) is measured against.
  std::uint64_t memory_units() const;

  std::uint64_t docs_seen() const { return docs_seen_; }
  std::uint64_t distinct_words() const { return distinct_words_; }
  std::uint64_t word_count(WordId w) const;
  std::uint64_t max_doc_len() const { return max_doc_len_; }

  // Stored keep-probabilities for one pair, in insertion order. Empty if the
  // pair never survived a flip.
  std::span<const double> bag(WordId x, WordId y) const;
  std::uint64_t bag_entries() const;

  // Order-independent structural fingerprint of counters and bags; two equal
  // digests mean the sketch state is identical.
  std::uint64_t digest() const;

 private:
  Measure measure_;
  double p_over_eps_;
  UniformRng rng_;
  std::vector<std::uint64_t> count_;
  std::uint64_t distinct_words_ = 0;
  std::uint64_t docs_seen_ = 0;
  std::uint64_t max_doc_len_ = 0;
  std::unordered_map<std::uint64_t, std::vector<double>> bags_;
};

}  // namespace disco
