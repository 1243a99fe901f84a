#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "disco/engine.hpp"
#include "disco/exact.hpp"

namespace disco {

// A family of k hash functions h_1..h_k mapping documents to [0, 1),
// determined entirely by (k, master_seed). `c` scales the sampling threshold
// used by the thresholded mapper.
struct HashFamily {
  std::uint32_t k = 0;
  std::uint64_t master_seed = 0;
  double c = 3.0;
};

// h_j(doc): deterministic, uniform on [0, 1).
double hash_value(const HashFamily& family, std::uint32_t j, std::uint32_t doc_id);

// Smallest k with k*eps >= c_factor, the function count needed to push the
// estimator's standard error below eps with constant-factor slack c_factor.
std::uint32_t choose_k(double eps, double c_factor);

// Per-(word, hash) minimum: the signature cell g_j(w) = min over docs
// containing w of (h_j(doc), doc), doc id breaking value ties.
struct MinEntry {
  double value = 0.0;
  std::uint32_t doc_id = 0;

  friend bool operator==(const MinEntry&, const MinEntry&) = default;
  friend bool operator<(const MinEntry& a, const MinEntry& b) {
    return a.value != b.value ? a.value < b.value : a.doc_id < b.doc_id;
  }
};

// Dense D x k signature table. Cells can be absent: the thresholded mapper
// may drop a row, and words with zero occurrences have none.
class MinHashTable {
 public:
  MinHashTable() = default;
  MinHashTable(std::uint32_t dict_size, std::uint32_t k);

  std::uint32_t dict_size() const { return dict_size_; }
  std::uint32_t k() const { return k_; }
  std::optional<MinEntry> cell(WordId w, std::uint32_t j) const;
  void set_cell(WordId w, std::uint32_t j, MinEntry e);
  std::uint64_t present_cells() const;

 private:
  std::uint32_t dict_size_ = 0, k_ = 0;
  std::vector<MinEntry> cells_;
  std::vector<std::uint8_t> present_;
};

struct MinHashRun {
  MinHashTable table;
  JobMetrics metrics;
};

// Full signature job: every document emits ((w, j), (h_j(doc), doc)) for each
// of its words and all j; reducers keep the minimum. Shuffle size is
// k * sum(|doc|).
MinHashRun minhash_full(const Corpus& corpus, const HashFamily& family,
                        const JobOptions& opts = {});

// Thresholded variant: the emission for (w, j) is kept only when
// h_j(doc) <= c*ln(D*k)/#(w), which preserves the row's true minimum unless
// every candidate hash lands above the threshold (probability (1/(Dk))^c per
// row at c >= 1). Expected shuffle size is at most D*k*c*ln(Dk).
MinHashRun minhash_sampled(const Corpus& corpus, const HashFamily& family,
                           const JobOptions& opts = {});

// Fraction of shared-present hash indices where the two rows collide (same
// minimizing value and doc). Unbiased for Jaccard similarity with the full
// table. Throws if no hash index is present for both words.
double jaccard_estimate(const MinHashTable& table, WordId x, WordId y);

// All pairs that collide on at least one hash index, with their estimates,
// filtered to estimate >= threshold and sorted in score_order.
std::vector<PairScore> minhash_all_pairs(const MinHashTable& table,
                                         double threshold);

}  // namespace disco
