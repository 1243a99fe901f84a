#include <doctest.h>

#include <cmath>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include "disco/engine.hpp"

using namespace disco;

namespace {

Corpus from_text(const std::string& text) {
  std::istringstream in(text);
  return load_corpus(in);
}

// Reference job used throughout: count word occurrences.
auto word_count_mapper = [](const Document& doc, MapperContext&,
                            Emitter<WordId, std::uint32_t>& out) {
  for (WordId w : doc.words) out.emit(w, 1u);
};
auto sum_reducer = [](const WordId&, std::span<const std::uint32_t> vals) {
  std::uint64_t a = 0;
  for (auto v : vals) a += v;
  return a;
};
auto sum_combiner = [](const WordId&, std::span<const std::uint32_t> vals) {
  std::uint32_t a = 0;
  for (auto v : vals) a += v;
  return a;
};

}  // namespace

TEST_CASE("word-count job reproduces the corpus background model") {
  Corpus c = generate_synthetic(200, 40, 6, 1.0, 11);
  auto res = run_job<WordId, std::uint32_t>(c, word_count_mapper, sum_reducer);
  std::uint64_t total_words = 0;
  for (const auto& d : c.docs) total_words += d.words.size();
  CHECK(res.metrics.shuffle_size == total_words);
  for (const auto& [w, count] : res.reduced) CHECK(count == c.word_count[w]);
  // every occurring word shows up exactly once, in ascending key order
  for (std::size_t i = 1; i < res.reduced.size(); ++i)
    CHECK(res.reduced[i - 1].first < res.reduced[i].first);
}

TEST_CASE("metrics: group sizes sum to shuffle size; max is max") {
  Corpus c = generate_synthetic(100, 30, 5, 1.0, 4);
  auto res = run_job<WordId, std::uint32_t>(c, word_count_mapper, sum_reducer);
  std::uint64_t sum = std::accumulate(res.metrics.group_sizes.begin(),
                                      res.metrics.group_sizes.end(), std::uint64_t(0));
  CHECK(sum == res.metrics.shuffle_size);
  std::uint64_t mx = 0;
  for (auto g : res.metrics.group_sizes) mx = std::max<std::uint64_t>(mx, g);
  CHECK(mx == res.metrics.max_reduce_key);
  CHECK(!res.metrics.combined_shuffle_size.has_value());
  CHECK(res.metrics.group_sizes.size() == res.reduced.size());
}

TEST_CASE("results are identical across thread counts and partitions") {
  Corpus c = generate_synthetic(300, 50, 8, 1.0, 5);
  // a mapper that actually consumes randomness, to exercise seed derivation
  auto random_mapper = [](const Document& doc, MapperContext& ctx,
                          Emitter<WordId, std::uint32_t>& out) {
    for (WordId w : doc.words)
      if (ctx.uniform() < 0.5) out.emit(w, 1u);
  };
  JobOptions base;
  base.seed = 99;
  auto ref = run_job<WordId, std::uint32_t>(c, random_mapper, sum_reducer, base);
  for (unsigned threads : {2u, 3u, 8u}) {
    JobOptions o = base;
    o.threads = threads;
    auto res = run_job<WordId, std::uint32_t>(c, random_mapper, sum_reducer, o);
    CHECK(res.reduced == ref.reduced);
    CHECK(res.metrics.shuffle_size == ref.metrics.shuffle_size);
    CHECK(res.metrics.group_sizes == ref.metrics.group_sizes);
  }
  for (unsigned parts : {1u, 3u, 7u}) {
    JobOptions o = base;
    o.threads = 2;
    o.combine_partitions = parts;
    auto res = run_job_with_combiner<WordId, std::uint32_t>(c, random_mapper,
                                                            sum_reducer, sum_combiner, o);
    CHECK(res.reduced == ref.reduced);
    CHECK(res.metrics.shuffle_size == ref.metrics.shuffle_size);
    CHECK(res.metrics.group_sizes == ref.metrics.group_sizes);
    REQUIRE(res.metrics.combined_shuffle_size.has_value());
    CHECK(*res.metrics.combined_shuffle_size <= res.metrics.shuffle_size);
    CHECK(*res.metrics.combined_shuffle_size >= res.reduced.size());
  }
}

TEST_CASE("different seeds change randomized map output") {
  Corpus c = generate_synthetic(100, 30, 6, 1.0, 5);
  auto random_mapper = [](const Document& doc, MapperContext& ctx,
                          Emitter<WordId, std::uint32_t>& out) {
    for (WordId w : doc.words)
      if (ctx.uniform() < 0.5) out.emit(w, 1u);
  };
  JobOptions a, b;
  a.seed = 1;
  b.seed = 2;
  auto ra = run_job<WordId, std::uint32_t>(c, random_mapper, sum_reducer, a);
  auto rb = run_job<WordId, std::uint32_t>(c, random_mapper, sum_reducer, b);
  CHECK(ra.reduced != rb.reduced);
}

TEST_CASE("single-partition combiner collapses each key to one record") {
  Corpus c = from_text("a b\na b\na c\n");
  JobOptions o;
  o.combine_partitions = 1;
  auto res = run_job_with_combiner<WordId, std::uint32_t>(c, word_count_mapper,
                                                          sum_reducer, sum_combiner, o);
  CHECK(res.metrics.shuffle_size == 6);
  REQUIRE(res.metrics.combined_shuffle_size.has_value());
  CHECK(*res.metrics.combined_shuffle_size == 3);  // one record per distinct word
  CHECK(res.reduced.size() == 3);
  CHECK(res.reduced[0].second == 3);  // #(a)
}

TEST_CASE("derive_seed never collides across documents") {
  std::unordered_set<std::uint64_t> seen;
  for (std::uint64_t doc = 0; doc < 200000; ++doc)
    seen.insert(derive_seed(1234, doc));
  CHECK(seen.size() == 200000);
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
  CHECK(derive_seed(5, 7) == derive_seed(5, 7));
}

TEST_CASE("uniform draws live in [0,1) and average to one half") {
  UniformRng rng(17);
  double sum = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    sum += u;
  }
  double mean = sum / n;
  double band = 3.0 * std::sqrt(1.0 / 12.0 / n);
  CHECK(mean > 0.5 - band);
  CHECK(mean < 0.5 + band);
}

TEST_CASE("mapper failures surface the offending document") {
  Corpus c = generate_synthetic(20, 10, 3, 0.0, 1);
  auto bad_mapper = [](const Document& doc, MapperContext&,
                       Emitter<WordId, std::uint32_t>& out) {
    if (doc.id == 7) throw std::runtime_error("boom");
    out.emit(doc.words[0], 1u);
  };
  try {
    run_job<WordId, std::uint32_t>(c, bad_mapper, sum_reducer);
    FAIL("expected JobError");
  } catch (const JobError& e) {
    std::string msg = e.what();
    CHECK(msg.find("doc 7") != std::string::npos);
    CHECK(msg.find("boom") != std::string::npos);
  }
}

TEST_CASE("reducer failures are wrapped too") {
  Corpus c = from_text("a b\n");
  auto bad_reducer = [](const WordId&, std::span<const std::uint32_t>) -> std::uint64_t {
    throw std::runtime_error("kaput");
  };
  CHECK_THROWS_AS((run_job<WordId, std::uint32_t>(c, word_count_mapper, bad_reducer)),
                  JobError);
}

TEST_CASE("empty corpus runs to an empty result") {
  Corpus c;
  auto res = run_job<WordId, std::uint32_t>(c, word_count_mapper, sum_reducer);
  CHECK(res.reduced.empty());
  CHECK(res.metrics.shuffle_size == 0);
  CHECK(res.metrics.max_reduce_key == 0);
}

TEST_CASE("values reach the reducer in document order") {
  Corpus c = from_text("a\na\na\n");
  auto doc_id_mapper = [](const Document& doc, MapperContext&,
                          Emitter<WordId, std::uint32_t>& out) {
    out.emit(doc.words[0], doc.id);
  };
  auto collect = [](const WordId&, std::span<const std::uint32_t> vals) {
    std::vector<std::uint32_t> v(vals.begin(), vals.end());
    return v;
  };
  for (unsigned threads : {1u, 2u, 3u}) {
    JobOptions o;
    o.threads = threads;
    auto res = run_job<WordId, std::uint32_t>(c, doc_id_mapper, collect, o);
    REQUIRE(res.reduced.size() == 1);
    CHECK(res.reduced[0].second == std::vector<std::uint32_t>{0, 1, 2});
  }
}
