#include "disco/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>

namespace disco {

WordPair make_word_pair(WordId a, WordId b) {
  if (a == b) throw std::invalid_argument("word pair needs two distinct words");
  return a < b ? WordPair{a, b} : WordPair{b, a};
}

std::optional<WordId> Corpus::find_token(const std::string& tok) const {
  auto it = token_ids.find(tok);
  if (it == token_ids.end()) return std::nullopt;
  return it->second;
}

namespace {

WordId intern(Corpus& c, const std::string& tok) {
  auto it = c.token_ids.find(tok);
  if (it != c.token_ids.end()) return it->second;
  WordId id = WordId(c.tokens.size());
  c.tokens.push_back(tok);
  c.token_ids.emplace(tok, id);
  c.word_count.push_back(0);
  return id;
}

// Appends a deduped, sorted document and updates the background counts.
void add_document(Corpus& c, std::vector<WordId> words) {
  std::sort(words.begin(), words.end());
  words.erase(std::unique(words.begin(), words.end()), words.end());
  for (WordId w : words) c.word_count[w]++;
  c.max_doc_len = std::max<std::uint32_t>(c.max_doc_len, std::uint32_t(words.size()));
  c.docs.push_back(Document{std::uint32_t(c.docs.size()), std::move(words)});
}

}  // namespace

Corpus load_corpus(std::istream& in, const LoadOptions& opts) {
  Corpus c;
  std::string line;
  std::uint64_t line_no = 0;
  std::vector<WordId> words;
  while (std::getline(in, line)) {
    ++line_no;
    c.stats.lines_read++;
    words.clear();
    size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
      size_t start = i;
      while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
      if (i == start) break;
      std::string tok = line.substr(start, i - start);
      c.stats.tokens_read++;
      if (opts.keep_tokens && !opts.keep_tokens->count(tok)) {
        c.stats.tokens_dropped++;
        continue;
      }
      words.push_back(intern(c, tok));
    }
    if (words.empty()) {
      c.stats.empty_lines_skipped++;
      continue;
    }
    std::sort(words.begin(), words.end());
    std::uint64_t before = words.size();
    words.erase(std::unique(words.begin(), words.end()), words.end());
    std::uint64_t dups = before - words.size();
    if (opts.max_doc_len && words.size() > *opts.max_doc_len) {
      throw CorpusError("line " + std::to_string(line_no) + ": document has " +
                        std::to_string(words.size()) + " distinct words, limit is " +
                        std::to_string(*opts.max_doc_len));
    }
    c.stats.duplicates_collapsed += dups;
    for (WordId w : words) c.word_count[w]++;
    c.max_doc_len = std::max<std::uint32_t>(c.max_doc_len, std::uint32_t(words.size()));
    c.docs.push_back(Document{std::uint32_t(c.docs.size()), std::move(words)});
  }
  if (in.bad()) throw CorpusError("read error at line " + std::to_string(line_no));
  return c;
}

Corpus load_corpus(const std::string& path, const LoadOptions& opts) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CorpusError("cannot open corpus file: " + path);
  return load_corpus(in, opts);
}

void write_corpus(const Corpus& corpus, std::ostream& out) {
  for (const Document& d : corpus.docs) {
    for (size_t i = 0; i < d.words.size(); ++i) {
      if (i) out << ' ';
      out << corpus.tokens[d.words[i]];
    }
    out << '\n';
  }
}

namespace {

std::string numbered_token(std::uint32_t i) { return "w" + std::to_string(i); }

void declare_dictionary(Corpus& c, std::uint32_t dict_size) {
  c.tokens.reserve(dict_size);
  c.word_count.assign(dict_size, 0);
  for (std::uint32_t i = 0; i < dict_size; ++i) {
    c.tokens.push_back(numbered_token(i));
    c.token_ids.emplace(c.tokens.back(), i);
  }
}

}  // namespace

Corpus generate_synthetic(std::uint32_t n_docs, std::uint32_t dict_size,
                          std::uint32_t doc_len, double skew,
                          std::uint64_t seed) {
  if (dict_size == 0) throw std::invalid_argument("dict_size must be positive");
  if (doc_len == 0 || doc_len > dict_size)
    throw std::invalid_argument("doc_len must be in [1, dict_size]");
  if (!(skew >= 0.0) || !std::isfinite(skew))
    throw std::invalid_argument("zipf skew must be finite and >= 0");

  Corpus c;
  declare_dictionary(c, dict_size);

  // Inverse-CDF table for P(rank i) proportional to 1/i^skew, i = 1..D.
  std::vector<double> cdf(dict_size);
  double total = 0.0;
  for (std::uint32_t i = 0; i < dict_size; ++i) {
    total += 1.0 / std::pow(double(i) + 1.0, skew);
    cdf[i] = total;
  }
  for (double& v : cdf) v /= total;
  cdf.back() = 1.0;

  std::mt19937_64 rng(seed);
  auto uniform = [&rng]() { return double(rng() >> 11) * 0x1.0p-53; };

  std::vector<WordId> words;
  std::vector<std::uint8_t> seen(dict_size, 0);
  for (std::uint32_t d = 0; d < n_docs; ++d) {
    words.clear();
    while (words.size() < doc_len) {
      double u = uniform();
      auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
      WordId w = WordId(it == cdf.end() ? dict_size - 1 : it - cdf.begin());
      if (!seen[w]) {
        seen[w] = 1;
        words.push_back(w);
      }
    }
    for (WordId w : words) seen[w] = 0;
    add_document(c, words);
  }
  return c;
}

Corpus generate_lower_bound(std::uint32_t dict_size, std::uint32_t group_len) {
  if (dict_size == 0 || group_len == 0)
    throw std::invalid_argument("dict_size and group_len must be positive");
  if (dict_size % group_len != 0)
    throw std::invalid_argument("group_len must divide dict_size");

  Corpus c;
  declare_dictionary(c, dict_size);
  for (std::uint32_t g = 0; g < dict_size / group_len; ++g) {
    std::vector<WordId> words(group_len);
    for (std::uint32_t i = 0; i < group_len; ++i) words[i] = g * group_len + i;
    for (std::uint32_t rep = 0; rep < group_len; ++rep) add_document(c, words);
  }
  return c;
}

}  // namespace disco
