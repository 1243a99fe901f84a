#include "disco/disco.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace disco {

double emit_probability(Measure m, double p_over_eps, std::uint64_t cx,
                        std::uint64_t cy) {
  if (!(p_over_eps > 0.0))
    throw std::invalid_argument("p_over_eps must be positive");
  if (cx == 0 || cy == 0)
    throw std::invalid_argument("emit_probability: word not in background model");
  switch (m) {
    case Measure::Cosine:
      return p_over_eps / std::sqrt(double(cx) * double(cy));
    case Measure::Overlap:
      return p_over_eps / double(std::min(cx, cy));
    case Measure::Dice:
      return 2.0 * p_over_eps / double(cx + cy);
    case Measure::Jaccard:
      break;
  }
  throw std::invalid_argument("no per-pair sampler for this measure");
}

double default_p_over_eps(std::uint32_t dict_size, double eps) {
  if (dict_size < 2) throw std::invalid_argument("need at least two words");
  if (!(eps > 0.0) || eps > 1.0) throw std::invalid_argument("eps must be in (0, 1]");
  return 2.0 * std::log(double(dict_size)) / eps;
}

double disco_estimate(Measure m, double p_over_eps, std::uint64_t key_count,
                      std::uint64_t cx, std::uint64_t cy) {
  double q = emit_probability(m, p_over_eps, cx, cy);
  if (q < 1.0) return double(key_count) / p_over_eps;
  return exact_score(m, key_count, cx, cy);
}

std::uint64_t naive_shuffle_size(const Corpus& corpus) {
  std::uint64_t total = 0;
  for (const Document& d : corpus.docs) {
    std::uint64_t n = d.words.size();
    total += n * (n - 1) / 2;
  }
  return total;
}

namespace {

std::vector<PairScore> to_scores(std::vector<std::pair<WordPair, double>> reduced) {
  std::vector<PairScore> out;
  out.reserve(reduced.size());
  for (auto& [pair, score] : reduced) out.push_back(PairScore{pair, score});
  std::sort(out.begin(), out.end(), score_order);
  return out;
}

}  // namespace

DiscoRun naive_pipeline(const Corpus& corpus, Measure m, const JobOptions& opts) {
  auto mapper = [](const Document& doc, MapperContext&,
                   Emitter<WordPair, std::uint32_t>& out) {
    for (std::size_t i = 0; i < doc.words.size(); ++i)
      for (std::size_t j = i + 1; j < doc.words.size(); ++j)
        out.emit(WordPair{doc.words[i], doc.words[j]}, 1u);
  };
  const auto& counts = corpus.word_count;
  auto reducer = [m, &counts](const WordPair& key,
                              std::span<const std::uint32_t> vals) {
    std::uint64_t a = 0;
    for (auto v : vals) a += v;
    return exact_score(m, a, counts[key.first], counts[key.second]);
  };
  auto combiner = [](const WordPair&, std::span<const std::uint32_t> vals) {
    std::uint32_t a = 0;
    for (auto v : vals) a += v;
    return a;
  };
  auto res = run_job_with_combiner<WordPair, std::uint32_t>(corpus, mapper, reducer,
                                                            combiner, opts);
  return DiscoRun{to_scores(std::move(res.reduced)), std::move(res.metrics)};
}

DiscoRun disco_pipeline(const Corpus& corpus, Measure m, double p_over_eps,
                        const JobOptions& opts) {
  if (m == Measure::Jaccard)
    throw std::invalid_argument("jaccard estimation uses min-hashing, not disco_pipeline");
  if (!(p_over_eps > 0.0))
    throw std::invalid_argument("p_over_eps must be positive");

  auto mapper = [m, p_over_eps](const Document& doc, MapperContext& ctx,
                                Emitter<WordPair, std::uint32_t>& out) {
    // One coin flip per co-occurrence, drawn unconditionally so the stream of
    // randomness is a fixed function of the document.
    for (std::size_t i = 0; i < doc.words.size(); ++i) {
      for (std::size_t j = i + 1; j < doc.words.size(); ++j) {
        WordId x = doc.words[i], y = doc.words[j];
        double q = emit_probability(m, p_over_eps, ctx.word_count[x],
                                    ctx.word_count[y]);
        if (ctx.uniform() < q) out.emit(WordPair{x, y}, 1u);
      }
    }
  };
  const auto& counts = corpus.word_count;
  auto reducer = [m, p_over_eps, &counts](const WordPair& key,
                                          std::span<const std::uint32_t> vals) {
    std::uint64_t a = 0;
    for (auto v : vals) a += v;
    return disco_estimate(m, p_over_eps, a, counts[key.first], counts[key.second]);
  };
  auto combiner = [](const WordPair&, std::span<const std::uint32_t> vals) {
    std::uint32_t a = 0;
    for (auto v : vals) a += v;
    return a;
  };
  auto res = run_job_with_combiner<WordPair, std::uint32_t>(corpus, mapper, reducer,
                                                            combiner, opts);
  return DiscoRun{to_scores(std::move(res.reduced)), std::move(res.metrics)};
}

void materialize_zeros(std::vector<PairScore>& estimates,
                       const std::vector<PairScore>& truth) {
  std::unordered_set<std::uint64_t> have;
  have.reserve(estimates.size());
  for (const auto& e : estimates) have.insert(e.pair.packed());
  for (const auto& t : truth)
    if (!have.count(t.pair.packed())) estimates.push_back(PairScore{t.pair, 0.0});
  std::sort(estimates.begin(), estimates.end(), score_order);
}

}  // namespace disco
