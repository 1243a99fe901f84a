#include "disco/exact.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace disco {

std::optional<Measure> parse_measure(const std::string& name) {
  if (name == "cosine") return Measure::Cosine;
  if (name == "jaccard") return Measure::Jaccard;
  if (name == "overlap") return Measure::Overlap;
  if (name == "dice") return Measure::Dice;
  return std::nullopt;
}

const char* measure_name(Measure m) {
  switch (m) {
    case Measure::Cosine: return "cosine";
    case Measure::Jaccard: return "jaccard";
    case Measure::Overlap: return "overlap";
    case Measure::Dice: return "dice";
  }
  return "?";
}

double exact_score(Measure m, std::uint64_t cxy, std::uint64_t cx, std::uint64_t cy) {
  if (cx < 1 || cy < 1)
    throw std::invalid_argument("exact_score: word counts must be >= 1");
  if (cxy > std::min(cx, cy))
    throw std::invalid_argument("exact_score: pair count exceeds a word count");
  double a = double(cxy);
  switch (m) {
    case Measure::Cosine: return a / std::sqrt(double(cx) * double(cy));
    case Measure::Jaccard: return a / double(cx + cy - cxy);
    case Measure::Overlap: return a / double(std::min(cx, cy));
    case Measure::Dice: return 2.0 * a / double(cx + cy);
  }
  throw std::invalid_argument("exact_score: bad measure");
}

bool score_order(const PairScore& a, const PairScore& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.pair < b.pair;
}

std::size_t PackedPairHash::operator()(const WordPair& p) const noexcept {
  std::uint64_t x = p.packed();
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return std::size_t(x ^ (x >> 31));
}

std::unordered_map<WordPair, std::uint64_t, PackedPairHash>
cooccurrence(const Corpus& corpus) {
  std::unordered_map<WordPair, std::uint64_t, PackedPairHash> counts;
  for (const Document& d : corpus.docs)
    for (std::size_t i = 0; i < d.words.size(); ++i)
      for (std::size_t j = i + 1; j < d.words.size(); ++j)
        counts[WordPair{d.words[i], d.words[j]}]++;
  return counts;
}

std::vector<std::pair<WordPair, std::uint32_t>>
cooccurrence_sorted(const Corpus& corpus) {
  std::size_t instances = 0;
  for (const Document& d : corpus.docs)
    instances += d.words.size() * (d.words.size() - 1) / 2;

  std::vector<std::uint64_t> keys;
  keys.reserve(instances);
  for (const Document& d : corpus.docs)
    for (std::size_t i = 0; i < d.words.size(); ++i)
      for (std::size_t j = i + 1; j < d.words.size(); ++j)
        keys.push_back(WordPair{d.words[i], d.words[j]}.packed());
  std::sort(keys.begin(), keys.end());

  std::vector<std::pair<WordPair, std::uint32_t>> out;
  for (std::size_t i = 0; i < keys.size();) {
    std::size_t j = i + 1;
    while (j < keys.size() && keys[j] == keys[i]) ++j;
    out.emplace_back(WordPair{WordId(keys[i] >> 32), WordId(keys[i] & 0xffffffffULL)},
                     std::uint32_t(j - i));
    i = j;
  }
  return out;
}

std::vector<PairScore> oracle_all_pairs(const Corpus& corpus, Measure m,
                                        double threshold) {
  std::vector<PairScore> out;
  for (const auto& [pair, cxy] : cooccurrence_sorted(corpus)) {
    double s = exact_score(m, cxy, corpus.word_count[pair.first],
                           corpus.word_count[pair.second]);
    if (s >= threshold) out.push_back(PairScore{pair, s});
  }
  std::sort(out.begin(), out.end(), score_order);
  return out;
}

}  // namespace disco
