#include "disco/streamsim.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>

#include "disco/disco.hpp"

namespace disco {

namespace {

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

StreamState::StreamState(Measure m, double p_over_eps, std::uint64_t seed)
    : measure_(m), p_over_eps_(p_over_eps), rng_(mix64(seed)) {
  if (m == Measure::Jaccard)
    throw std::invalid_argument("jaccard has no streaming sampler");
  if (!(p_over_eps > 0.0))
    throw std::invalid_argument("p_over_eps must be positive");
}

void StreamState::update(std::span<const WordId> words) {
  std::vector<WordId> doc(words.begin(), words.end());
  std::sort(doc.begin(), doc.end());
  doc.erase(std::unique(doc.begin(), doc.end()), doc.end());

  WordId max_w = 0;
  for (WordId w : doc) max_w = std::max(max_w, w);
  if (std::size_t(max_w) + 1 > count_.size()) count_.resize(std::size_t(max_w) + 1, 0);

  // Counters first: the flip below sees counts that include this document.
  for (WordId w : doc) {
    if (count_[w] == 0) ++distinct_words_;
    count_[w]++;
  }
  ++docs_seen_;
  max_doc_len_ = std::max<std::uint64_t>(max_doc_len_, doc.size());

  // One flip per co-occurrence, always drawn; survivors remember the clamped
  // probability they were kept with.
  for (std::size_t i = 0; i < doc.size(); ++i) {
    for (std::size_t j = i + 1; j < doc.size(); ++j) {
      double q = std::min(
          1.0, emit_probability(measure_, p_over_eps_, count_[doc[i]], count_[doc[j]]));
      if (rng_.uniform() < q)
        bags_[WordPair{doc[i], doc[j]}.packed()].push_back(q);
    }
  }
}

std::uint64_t StreamState::word_count(WordId w) const {
  return w < count_.size() ? count_[w] : 0;
}

double StreamState::query(WordId x, WordId y, std::uint64_t query_seed) const {
  if (word_count(x) == 0 || word_count(y) == 0)
    throw std::runtime_error("query for a word not seen in the stream");
  if (x == y) return 1.0;

  WordPair pair = make_word_pair(x, y);
  auto it = bags_.find(pair.packed());
  std::span<const double> entries =
      it == bags_.end() ? std::span<const double>() : std::span<const double>(it->second);

  double target = emit_probability(measure_, p_over_eps_, word_count(x), word_count(y));
  if (target >= 1.0) {
    // Every co-occurrence was kept with probability 1 (q only shrinks as
    // counters grow), so the bag holds the exact count.
    return exact_score(measure_, entries.size(), word_count(x), word_count(y));
  }

  UniformRng rng(mix64(query_seed ^ mix64(pair.packed())));
  std::uint64_t survivors = 0;
  for (double q : entries) {
    // Inserted with probability q >= target; thinning by target/q makes the
    // composite exactly target.
    if (rng.uniform() < target / q) ++survivors;
  }
  return double(survivors) / p_over_eps_;
}

std::uint64_t StreamState::memory_units() const {
  return bag_entries() + distinct_words_;
}

std::uint64_t StreamState::bag_entries() const {
  std::uint64_t n = 0;
  for (const auto& [_, bag] : bags_) n += bag.size();
  return n;
}

std::span<const double> StreamState::bag(WordId x, WordId y) const {
  auto it = bags_.find(make_word_pair(x, y).packed());
  if (it == bags_.end()) return {};
  return std::span<const double>(it->second);
}

std::uint64_t StreamState::digest() const {
  // Commutative accumulation so the unordered_map's iteration order is moot.
  std::uint64_t d = mix64(docs_seen_ ^ (distinct_words_ << 32));
  for (std::size_t w = 0; w < count_.size(); ++w)
    if (count_[w]) d += mix64(w * 0x100000001b3ULL + count_[w]);
  for (const auto& [key, bag] : bags_) {
    std::uint64_t h = mix64(key);
    for (double q : bag) {
      std::uint64_t bits;
      static_assert(sizeof(bits) == sizeof(q));
      std::memcpy(&bits, &q, sizeof(bits));
      h = mix64(h ^ bits);
    }
    d += h;
  }
  return d;
}

}  // namespace disco
