#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace disco {

using WordId = std::uint32_t;

// Canonical unordered pair of words: first < second.
struct WordPair {
  WordId first = 0;
  WordId second = 0;

  friend bool operator==(const WordPair&, const WordPair&) = default;
  friend bool operator<(const WordPair& a, const WordPair& b) {
    return a.first != b.first ? a.first < b.first : a.second < b.second;
  }

  std::uint64_t packed() const {
    return (std::uint64_t(first) << 32) | second;
  }
};

WordPair make_word_pair(WordId a, WordId b);  // canonicalizes; rejects a == b

// A document is a set: word ids are sorted and duplicates are collapsed.
struct Document {
  std::uint32_t id = 0;
  std::vector<WordId> words;
};

struct LoadStats {
  std::uint64_t lines_read = 0;
  std::uint64_t empty_lines_skipped = 0;
  std::uint64_t tokens_read = 0;
  std::uint64_t duplicates_collapsed = 0;
  std::uint64_t tokens_dropped = 0;  // removed by a keep-list, if any
};

// Immutable after construction (by load_corpus or a generator).
struct Corpus {
  std::vector<Document> docs;
  std::vector<std::string> tokens;                       // id -> token
  std::unordered_map<std::string, WordId> token_ids;     // token -> id
  std::vector<std::uint64_t> word_count;                 // id -> #(w), docs containing w
  std::uint32_t max_doc_len = 0;                         // L, after dedup
  LoadStats stats;

  std::uint32_t num_docs() const { return std::uint32_t(docs.size()); }
  std::uint32_t dict_size() const { return std::uint32_t(tokens.size()); }
  std::optional<WordId> find_token(const std::string& tok) const;
  const std::string& token(WordId w) const { return tokens.at(w); }
};

struct LoadOptions {
  // Reject any document whose deduplicated length exceeds this.
  std::optional<std::uint32_t> max_doc_len;
  // If set, tokens outside the list are dropped before dedup/length checks.
  std::optional<std::unordered_set<std::string>> keep_tokens;
};

class CorpusError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One document per line, whitespace-separated tokens, UTF-8 treated as bytes.
// Empty (all-whitespace) lines are skipped and counted in stats. Word ids are
// assigned in first-appearance order. Throws CorpusError with a line number on
// I/O failure or an over-long document.
Corpus load_corpus(const std::string& path, const LoadOptions& opts = {});
Corpus load_corpus(std::istream& in, const LoadOptions& opts = {});

// Writes one line per document; round-trips through load_corpus with ids
// preserved (tokens appear in id order the first time they occur).
void write_corpus(const Corpus& corpus, std::ostream& out);

// n_docs documents of doc_len distinct words drawn from a Zipf(skew) law over
// dict_size tokens "w0".."w{D-1}". The full dictionary is declared even if the
// tail is never sampled. Deterministic in seed.
Corpus generate_synthetic(std::uint32_t n_docs, std::uint32_t dict_size,
                          std::uint32_t doc_len, double skew,
                          std::uint64_t seed);

// Worst-case corpus: dict_size words split into dict_size/group_len groups;
// each group's document (all group_len words) is repeated group_len times,
// so every intra-group pair has similarity 1 under all measures. Requires
// group_len to divide dict_size.
Corpus generate_lower_bound(std::uint32_t dict_size, std::uint32_t group_len);

}  // namespace disco
