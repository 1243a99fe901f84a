#include "disco/minhash.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace disco {

namespace {

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Key for signature cells: one reduce key per (word, hash index).
struct WordHashKey {
  WordId word = 0;
  std::uint32_t j = 0;

  friend bool operator==(const WordHashKey&, const WordHashKey&) = default;
  friend bool operator<(const WordHashKey& a, const WordHashKey& b) {
    return a.word != b.word ? a.word < b.word : a.j < b.j;
  }
};

}  // namespace

double hash_value(const HashFamily& family, std::uint32_t j, std::uint32_t doc_id) {
  if (j >= family.k) throw std::invalid_argument("hash index out of range");
  std::uint64_t x = mix64(family.master_seed + 0xd1b54a32d192ed03ULL * (j + 1));
  x = mix64(x ^ (0x2545f4914f6cdd1dULL * (std::uint64_t(doc_id) + 1)));
  return double(x >> 11) * 0x1.0p-53;
}

std::uint32_t choose_k(double eps, double c_factor) {
  if (!(eps > 0.0) || eps > 1.0) throw std::invalid_argument("eps must be in (0, 1]");
  if (!(c_factor >= 1.0)) throw std::invalid_argument("c_factor must be >= 1");
  return std::uint32_t(std::ceil(c_factor / eps));
}

MinHashTable::MinHashTable(std::uint32_t dict_size, std::uint32_t k)
    : dict_size_(dict_size), k_(k), cells_(std::size_t(dict_size) * k),
      present_(std::size_t(dict_size) * k, 0) {}

std::optional<MinEntry> MinHashTable::cell(WordId w, std::uint32_t j) const {
  if (w >= dict_size_ || j >= k_) throw std::invalid_argument("cell out of range");
  std::size_t idx = std::size_t(w) * k_ + j;
  if (!present_[idx]) return std::nullopt;
  return cells_[idx];
}

void MinHashTable::set_cell(WordId w, std::uint32_t j, MinEntry e) {
  if (w >= dict_size_ || j >= k_) throw std::invalid_argument("cell out of range");
  std::size_t idx = std::size_t(w) * k_ + j;
  cells_[idx] = e;
  present_[idx] = 1;
}

std::uint64_t MinHashTable::present_cells() const {
  std::uint64_t n = 0;
  for (auto p : present_) n += p;
  return n;
}

namespace {

MinHashRun run_signature_job(const Corpus& corpus, const HashFamily& family,
                             bool thresholded, const JobOptions& opts) {
  if (family.k == 0) throw std::invalid_argument("hash family is empty");
  if (thresholded && !(family.c > 0.0))
    throw std::invalid_argument("threshold factor c must be positive");

  // Per-word emission threshold c*ln(D*k)/#(w); >= 1 means nothing is dropped.
  std::vector<double> threshold;
  if (thresholded) {
    double dk = double(corpus.dict_size()) * double(family.k);
    if (dk < 1.0) dk = 1.0;
    threshold.resize(corpus.word_count.size(), 1.0);
    for (std::size_t w = 0; w < corpus.word_count.size(); ++w)
      if (corpus.word_count[w] > 0)
        threshold[w] = family.c * std::log(dk) / double(corpus.word_count[w]);
  }

  auto mapper = [&family, thresholded, &threshold](
                    const Document& doc, MapperContext&,
                    Emitter<WordHashKey, MinEntry>& out) {
    for (std::uint32_t j = 0; j < family.k; ++j) {
      double h = hash_value(family, j, doc.id);
      for (WordId w : doc.words) {
        if (thresholded && h > threshold[w]) continue;
        out.emit(WordHashKey{w, j}, MinEntry{h, doc.id});
      }
    }
  };
  auto reducer = [](const WordHashKey&, std::span<const MinEntry> vals) {
    return *std::min_element(vals.begin(), vals.end());
  };
  auto combiner = [](const WordHashKey&, std::span<const MinEntry> vals) {
    return *std::min_element(vals.begin(), vals.end());
  };

  auto res = run_job_with_combiner<WordHashKey, MinEntry>(corpus, mapper, reducer,
                                                          combiner, opts);
  MinHashRun run;
  run.table = MinHashTable(corpus.dict_size(), family.k);
  for (const auto& [key, entry] : res.reduced)
    run.table.set_cell(key.word, key.j, entry);
  run.metrics = std::move(res.metrics);
  return run;
}

}  // namespace

MinHashRun minhash_full(const Corpus& corpus, const HashFamily& family,
                        const JobOptions& opts) {
  return run_signature_job(corpus, family, false, opts);
}

MinHashRun minhash_sampled(const Corpus& corpus, const HashFamily& family,
                           const JobOptions& opts) {
  return run_signature_job(corpus, family, true, opts);
}

double jaccard_estimate(const MinHashTable& table, WordId x, WordId y) {
  std::uint32_t shared = 0, collisions = 0;
  for (std::uint32_t j = 0; j < table.k(); ++j) {
    auto cx = table.cell(x, j), cy = table.cell(y, j);
    if (!cx || !cy) continue;
    ++shared;
    if (*cx == *cy) ++collisions;
  }
  if (shared == 0)
    throw std::runtime_error("jaccard_estimate: no shared hash index present");
  return double(collisions) / double(shared);
}

std::vector<PairScore> minhash_all_pairs(const MinHashTable& table,
                                         double threshold) {
  // For each hash index, group present rows by their (value, doc) minimum;
  // rows in the same group collide there.
  struct Cell {
    MinEntry entry;
    WordId word;
  };
  std::unordered_map<WordPair, std::uint32_t, PackedPairHash> collisions;
  std::vector<Cell> cells;
  for (std::uint32_t j = 0; j < table.k(); ++j) {
    cells.clear();
    for (WordId w = 0; w < table.dict_size(); ++w)
      if (auto e = table.cell(w, j)) cells.push_back(Cell{*e, w});
    std::sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) {
      return a.entry != b.entry ? a.entry < b.entry : a.word < b.word;
    });
    for (std::size_t i = 0; i < cells.size();) {
      std::size_t r = i + 1;
      while (r < cells.size() && cells[r].entry == cells[i].entry) ++r;
      for (std::size_t s = i; s < r; ++s)
        for (std::size_t t = s + 1; t < r; ++t)
          collisions[WordPair{cells[s].word, cells[t].word}]++;
      i = r;
    }
  }

  std::vector<PairScore> out;
  for (const auto& [pair, _] : collisions) {
    double est = jaccard_estimate(table, pair.first, pair.second);
    if (est >= threshold) out.push_back(PairScore{pair, est});
  }
  std::sort(out.begin(), out.end(), score_order);
  return out;
}

}  // namespace disco
