#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "disco/exact.hpp"

using namespace disco;

namespace {

Corpus from_text(const std::string& text) {
  std::istringstream in(text);
  return load_corpus(in);
}

}  // namespace

TEST_CASE("score formulas on (cxy=2, cx=3, cy=2)") {
  CHECK(exact_score(Measure::Cosine, 2, 3, 2) == doctest::Approx(2.0 / std::sqrt(6.0)).epsilon(1e-15));
  CHECK(exact_score(Measure::Cosine, 2, 3, 2) == doctest::Approx(0.816497).epsilon(1e-6));
  CHECK(exact_score(Measure::Jaccard, 2, 3, 2) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(exact_score(Measure::Overlap, 2, 3, 2) == 1.0);
  CHECK(exact_score(Measure::Dice, 2, 3, 2) == doctest::Approx(0.8).epsilon(1e-15));
}

TEST_CASE("score preconditions") {
  CHECK_THROWS_AS(exact_score(Measure::Cosine, 3, 2, 3), std::invalid_argument);
  CHECK_THROWS_AS(exact_score(Measure::Cosine, 0, 0, 3), std::invalid_argument);
  CHECK_THROWS_AS(exact_score(Measure::Jaccard, 1, 1, 0), std::invalid_argument);
  CHECK_NOTHROW(exact_score(Measure::Cosine, 0, 1, 1));  // zero overlap is fine
  CHECK(exact_score(Measure::Jaccard, 0, 5, 7) == 0.0);
}

TEST_CASE("scores are symmetric, bounded, and ordered across measures") {
  std::mt19937_64 rng(42);
  for (int t = 0; t < 2000; ++t) {
    std::uint64_t cx = 1 + rng() % 1000, cy = 1 + rng() % 1000;
    std::uint64_t cxy = rng() % (std::min(cx, cy) + 1);
    for (Measure m : {Measure::Cosine, Measure::Jaccard, Measure::Overlap, Measure::Dice}) {
      double s = exact_score(m, cxy, cx, cy);
      CHECK(s == exact_score(m, cxy, cy, cx));
      CHECK(s >= 0.0);
      CHECK(s <= 1.0);
    }
    // jaccard <= dice <= cosine <= overlap, pointwise
    double j = exact_score(Measure::Jaccard, cxy, cx, cy);
    double d = exact_score(Measure::Dice, cxy, cx, cy);
    double c = exact_score(Measure::Cosine, cxy, cx, cy);
    double o = exact_score(Measure::Overlap, cxy, cx, cy);
    CHECK(j <= d + 1e-15);
    CHECK(d <= c + 1e-15);
    CHECK(c <= o + 1e-15);
  }
}

TEST_CASE("identical support gives similarity one") {
  for (Measure m : {Measure::Cosine, Measure::Jaccard, Measure::Overlap, Measure::Dice})
    CHECK(exact_score(m, 9, 9, 9) == 1.0);
  // overlap already saturates when the smaller word is contained
  CHECK(exact_score(Measure::Overlap, 4, 4, 100) == 1.0);
  CHECK(exact_score(Measure::Cosine, 4, 4, 100) < 1.0);
}

TEST_CASE("cooccurrence counts of the three-line corpus") {
  Corpus c = from_text("a b\na b\na c\n");
  auto counts = cooccurrence(c);
  REQUIRE(counts.size() == 2);
  CHECK(counts.at(WordPair{0, 1}) == 2);  // (a,b)
  CHECK(counts.at(WordPair{0, 2}) == 1);  // (a,c)

  auto sorted = cooccurrence_sorted(c);
  REQUIRE(sorted.size() == 2);
  CHECK(sorted[0].first == WordPair{0, 1});
  CHECK(sorted[0].second == 2);
  CHECK(sorted[1].first == WordPair{0, 2});
  CHECK(sorted[1].second == 1);
}

TEST_CASE("hash map and sorted co-occurrence agree on random corpora") {
  for (std::uint64_t seed : {1, 2, 3}) {
    Corpus c = generate_synthetic(300, 50, 8, 1.0, seed);
    auto hashed = cooccurrence(c);
    auto sorted = cooccurrence_sorted(c);
    REQUIRE(hashed.size() == sorted.size());
    for (const auto& [pair, count] : sorted) {
      CHECK(hashed.at(pair) == count);
      CHECK(pair.first < pair.second);
    }
    for (std::size_t i = 1; i < sorted.size(); ++i)
      CHECK(sorted[i - 1].first < sorted[i].first);
  }
}

TEST_CASE("oracle output and ordering on the three-line corpus") {
  Corpus c = from_text("a b\na b\na c\n");
  auto scores = oracle_all_pairs(c, Measure::Cosine, 0.0);
  REQUIRE(scores.size() == 2);
  CHECK(scores[0].pair == WordPair{0, 1});
  CHECK(scores[0].score == doctest::Approx(0.816497).epsilon(1e-6));
  CHECK(scores[1].pair == WordPair{0, 2});
  CHECK(scores[1].score == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-15));

  auto top = oracle_all_pairs(c, Measure::Cosine, 0.6);
  REQUIRE(top.size() == 1);
  CHECK(top[0].pair == WordPair{0, 1});

  // threshold above every score
  CHECK(oracle_all_pairs(c, Measure::Cosine, 0.99).empty());
}

TEST_CASE("oracle ties break by ascending pair") {
  // two disjoint identical-score pairs
  Corpus c = from_text("a b\nc d\n");
  auto scores = oracle_all_pairs(c, Measure::Jaccard, 0.0);
  REQUIRE(scores.size() == 2);
  CHECK(scores[0].score == scores[1].score);
  CHECK(scores[0].pair < scores[1].pair);
}

TEST_CASE("measure names parse and print") {
  CHECK(parse_measure("cosine") == Measure::Cosine);
  CHECK(parse_measure("jaccard") == Measure::Jaccard);
  CHECK(parse_measure("overlap") == Measure::Overlap);
  CHECK(parse_measure("dice") == Measure::Dice);
  CHECK(!parse_measure("euclid").has_value());
  CHECK(std::string(measure_name(Measure::Dice)) == "dice");
  for (const char* n : {"cosine", "jaccard", "overlap", "dice"})
    CHECK(measure_name(*parse_measure(n)) == std::string(n));
}
