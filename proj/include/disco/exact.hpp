#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "disco/corpus.hpp"

namespace disco {

enum class Measure { Cosine, Jaccard, Overlap, Dice };

// "cosine" | "jaccard" | "overlap" | "dice" (lowercase).
std::optional<Measure> parse_measure(const std::string& name);
const char* measure_name(Measure m);

// Similarity from sufficient statistics: cxy = #(x,y), cx = #(x), cy = #(y).
// Requires cx, cy >= 1 and 0 <= cxy <= min(cx, cy); throws invalid_argument
// otherwise. This is the single scoring path shared by the brute-force oracle
// and every pipeline, so "exact" results agree bit for bit.
double exact_score(Measure m, std::uint64_t cxy, std::uint64_t cx, std::uint64_t cy);

struct PairScore {
  WordPair pair;
  double score = 0.0;

  friend bool operator==(const PairScore&, const PairScore&) = default;
};

// Descending score, ties by ascending pair: the canonical output order.
bool score_order(const PairScore& a, const PairScore& b);

struct PackedPairHash {
  std::size_t operator()(const WordPair& p) const noexcept;
};

// All co-occurring pairs and their counts. Pairs that never co-occur are
// absent. Convenient for small corpora and spot checks.
std::unordered_map<WordPair, std::uint64_t, PackedPairHash>
cooccurrence(const Corpus& corpus);

// Same information in ascending pair order, built by sorting instead of
// hashing; memory-lean enough for corpora with tens of millions of pair
// instances. Counts fit 32 bits at that scale.
std::vector<std::pair<WordPair, std::uint32_t>>
cooccurrence_sorted(const Corpus& corpus);

// Brute-force reference: every pair with score >= threshold, in score_order.
std::vector<PairScore> oracle_all_pairs(const Corpus& corpus, Measure m,
                                        double threshold);

}  // namespace disco
