#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <type_traits>
#include <utility>
#include <vector>

#include "disco/corpus.hpp"

namespace disco {

// Stable mix of (job seed, doc id) -> per-document RNG seed. Injective in
// doc_id for a fixed job seed, so two documents can never share a stream.
std::uint64_t derive_seed(std::uint64_t job_seed, std::uint64_t doc_id) noexcept;

// mt19937_64 with a bit-reproducible unit-interval draw. std::uniform_real_
// distribution is implementation-defined, so doubles are built by hand.
class UniformRng {
 public:
  explicit UniformRng(std::uint64_t seed) : eng_(seed) {}
  double uniform() { return double(eng_() >> 11) * 0x1.0p-53; }
  std::uint64_t next_u64() { return eng_(); }

 private:
  std::mt19937_64 eng_;
};

// Per-document state handed to a mapper. The RNG is seeded from
// derive_seed(job_seed, doc_id), making map output independent of thread
// count and scheduling order.
struct MapperContext {
  std::uint32_t doc_id;
  UniformRng rng;
  const std::vector<std::uint64_t>& word_count;  // background model #(w)

  double uniform() { return rng.uniform(); }
};

template <typename Key, typename Value>
class Emitter {
 public:
  void emit(const Key& key, const Value& value) { out_.emplace_back(key, value); }
  std::vector<std::pair<Key, Value>> take() { return std::move(out_); }

 private:
  std::vector<std::pair<Key, Value>> out_;
};

struct JobOptions {
  std::uint64_t seed = 0;
  unsigned threads = 1;             // 0 = hardware concurrency
  unsigned combine_partitions = 0;  // 0 disables the combiner
};

struct JobMetrics {
  // Total map emissions, counted before any combining.
  std::uint64_t shuffle_size = 0;
  // Values seen by the busiest reduce key (pre-combine).
  std::uint64_t max_reduce_key = 0;
  // Records shipped when a combiner ran: distinct keys summed over partitions.
  std::optional<std::uint64_t> combined_shuffle_size;
  // Pre-combine per-key value counts, aligned with JobResult::reduced.
  std::vector<std::uint32_t> group_sizes;
};

template <typename Key, typename Out>
struct JobResult {
  std::vector<std::pair<Key, Out>> reduced;  // ascending key order
  JobMetrics metrics;
};

class JobError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

// Static contiguous split of [0, n) across worker threads; runs inline when a
// single worker suffices. The first captured error (lowest worker) rethrows.
template <typename Fn>
void parallel_chunks(std::size_t n, unsigned threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  if (n == 0) return;
  std::size_t workers = std::min<std::size_t>(threads, n);
  if (workers <= 1) {
    fn(std::size_t(0), n);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    std::size_t lo = w * chunk, hi = std::min(n, lo + chunk);
    pool.emplace_back([&fn, &errors, w, lo, hi] {
      try {
        if (lo < hi) fn(lo, hi);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

// Groups a (key, value) stream in place: stable sort by key (so values keep
// document order within each group) and return group boundaries.
template <typename Key, typename Value>
std::vector<std::size_t> group_by_key(std::vector<std::pair<Key, Value>>& data) {
  std::stable_sort(data.begin(), data.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<std::size_t> offsets;
  for (std::size_t i = 0; i < data.size();) {
    offsets.push_back(i);
    std::size_t j = i + 1;
    while (j < data.size() && data[j].first == data[i].first) ++j;
    i = j;
  }
  offsets.push_back(data.size());
  return offsets;
}

}  // namespace detail

// Simulated map-shuffle-reduce over the corpus:
//   mapper(const Document&, MapperContext&, Emitter<Key, Value>&)
//   reducer(const Key&, std::span<const Value>) -> Out
//   combiner(const Key&, std::span<const Value>) -> Value   [may be nullptr]
//
// Emissions are gathered per document and grouped by a stable sort, so the
// result and every metric are a pure function of (corpus, mapper, seed) no
// matter how many threads or combine partitions are configured. When a
// combiner runs (combine_partitions >= 1), documents are split into that many
// contiguous ranges, each range is pre-reduced locally, and the reducer sees
// one combined value per (partition, key); shuffle_size, group_sizes and
// max_reduce_key always describe the raw pre-combine stream.
template <typename Key, typename Value, typename Mapper, typename Reducer,
          typename Combiner>
auto run_job_with_combiner(const Corpus& corpus, Mapper&& mapper,
                           Reducer&& reducer, Combiner&& combiner,
                           const JobOptions& opts) {
  using Out = std::invoke_result_t<Reducer&, const Key&, std::span<const Value>>;
  constexpr bool has_combiner = !std::is_null_pointer_v<std::decay_t<Combiner>>;

  const std::size_t n_docs = corpus.docs.size();
  std::vector<std::vector<std::pair<Key, Value>>> per_doc(n_docs);

  detail::parallel_chunks(n_docs, opts.threads, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      const Document& doc = corpus.docs[i];
      MapperContext ctx{doc.id, UniformRng(derive_seed(opts.seed, doc.id)),
                        corpus.word_count};
      Emitter<Key, Value> em;
      try {
        mapper(doc, ctx, em);
      } catch (const std::exception& e) {
        throw JobError("map failed on doc " + std::to_string(doc.id) + ": " +
                       e.what());
      }
      per_doc[i] = em.take();
    }
  });

  JobResult<Key, Out> result;
  JobMetrics& metrics = result.metrics;
  for (const auto& v : per_doc) metrics.shuffle_size += v.size();

  // Scratch for handing a group's values to the combiner/reducer as a dense
  // span (they sit interleaved with keys after the sort).
  auto values_of = [](const std::vector<std::pair<Key, Value>>& data,
                      std::size_t lo, std::size_t hi, std::vector<Value>& out) {
    out.clear();
    for (std::size_t i = lo; i < hi; ++i) out.push_back(data[i].second);
  };

  // Optional combine pass over contiguous document partitions. Runs before the
  // global flatten so partition boundaries are still known.
  std::vector<std::pair<Key, Value>> combined;
  if constexpr (has_combiner) {
    if (opts.combine_partitions > 0 && n_docs > 0) {
      std::size_t parts = std::min<std::size_t>(opts.combine_partitions, n_docs);
      std::size_t chunk = (n_docs + parts - 1) / parts;
      std::vector<Value> vals;
      std::vector<std::pair<Key, Value>> local;
      for (std::size_t p = 0; p < parts; ++p) {
        std::size_t lo = p * chunk, hi = std::min(n_docs, lo + chunk);
        local.clear();
        for (std::size_t d = lo; d < hi; ++d)
          local.insert(local.end(), per_doc[d].begin(), per_doc[d].end());
        auto offs = detail::group_by_key(local);
        for (std::size_t g = 0; g + 1 < offs.size(); ++g) {
          const Key& key = local[offs[g]].first;
          values_of(local, offs[g], offs[g + 1], vals);
          combined.emplace_back(key, combiner(key, std::span<const Value>(vals)));
        }
      }
      metrics.combined_shuffle_size = combined.size();
    }
  }

  // Global shuffle: flatten in document order, group, record metrics.
  std::vector<std::pair<Key, Value>> all;
  all.reserve(metrics.shuffle_size);
  for (auto& v : per_doc) {
    all.insert(all.end(), v.begin(), v.end());
    v.clear();
    v.shrink_to_fit();
  }
  per_doc.clear();
  auto offsets = detail::group_by_key(all);
  const std::size_t n_keys = offsets.size() - 1;
  metrics.group_sizes.resize(n_keys);
  for (std::size_t g = 0; g < n_keys; ++g) {
    metrics.group_sizes[g] = std::uint32_t(offsets[g + 1] - offsets[g]);
    metrics.max_reduce_key =
        std::max<std::uint64_t>(metrics.max_reduce_key, metrics.group_sizes[g]);
  }

  // Reduce, either over the raw groups or over the combined records.
  std::vector<std::pair<Key, Value>>* data = &all;
  std::vector<std::size_t>* offs = &offsets;
  std::vector<std::size_t> combined_offsets;
  if (metrics.combined_shuffle_size) {
    all.clear();
    all.shrink_to_fit();
    combined_offsets = detail::group_by_key(combined);
    data = &combined;
    offs = &combined_offsets;
    if (combined_offsets.size() - 1 != n_keys)
      throw JobError("combiner changed the key set");
  }

  const std::size_t groups = offs->size() - 1;
  result.reduced.resize(groups);
  detail::parallel_chunks(groups, opts.threads, [&](std::size_t lo, std::size_t hi) {
    std::vector<Value> vals;
    for (std::size_t g = lo; g < hi; ++g) {
      const Key& key = (*data)[(*offs)[g]].first;
      values_of(*data, (*offs)[g], (*offs)[g + 1], vals);
      try {
        result.reduced[g] = {key, reducer(key, std::span<const Value>(vals))};
      } catch (const std::exception& e) {
        throw JobError("reduce failed on key group " + std::to_string(g) + ": " +
                       e.what());
      }
    }
  });
  return result;
}

template <typename Key, typename Value, typename Mapper, typename Reducer>
auto run_job(const Corpus& corpus, Mapper&& mapper, Reducer&& reducer,
             const JobOptions& opts = {}) {
  return run_job_with_combiner<Key, Value>(corpus, std::forward<Mapper>(mapper),
                                           std::forward<Reducer>(reducer), nullptr,
                                           opts);
}

}  // namespace disco
