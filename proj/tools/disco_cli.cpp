// Command-line front end: corpus generators, exact and sampled all-pairs
// similarity, min-hash signatures, oversampling sweeps, and the streaming
// sketch. Every run is deterministic in its --seed.
#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "disco/csv.hpp"
#include "disco/disco.hpp"
#include "disco/engine.hpp"
#include "disco/exact.hpp"
#include "disco/minhash.hpp"
#include "disco/streamsim.hpp"
#include "disco/sweep.hpp"

using nlohmann::json;
using namespace disco;

namespace {

// "-" means stdout.
class OutFile {
 public:
  explicit OutFile(const std::string& path) {
    if (path != "-") {
      file_.open(path, std::ios::binary);
      if (!file_) throw std::runtime_error("cannot open output file: " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

Measure require_measure(const std::string& name) {
  auto m = parse_measure(name);
  if (!m)
    throw std::invalid_argument("unknown measure '" + name +
                                "' (expected cosine, jaccard, overlap or dice)");
  return *m;
}

Measure require_sampling_measure(const std::string& name) {
  Measure m = require_measure(name);
  if (m == Measure::Jaccard)
    throw std::invalid_argument(
        "jaccard is estimated with 'minhash'; pick cosine, dice or overlap here");
  return m;
}

void write_json(const json& j, const std::string& path) {
  OutFile out(path);
  out.stream() << j.dump(2) << "\n";
}

struct ScoreTable {
  bool with_truth = false;
  bool full_precision = false;
  const Corpus* corpus = nullptr;
};

// word_x,word_y,estimate[,truth,abs_error]
void write_scores(std::ostream& os, const std::vector<PairScore>& scores,
                  const std::unordered_map<std::uint64_t, double>* truth,
                  const ScoreTable& t) {
  os << "word_x,word_y," << (truth ? "estimate,truth,abs_error" : "score") << "\n";
  for (const auto& s : scores) {
    os << csv::field(t.corpus->token(s.pair.first)) << ','
       << csv::field(t.corpus->token(s.pair.second)) << ','
       << csv::number(s.score, t.full_precision);
    if (truth) {
      auto it = truth->find(s.pair.packed());
      double tv = it == truth->end() ? 0.0 : it->second;
      os << ',' << csv::number(tv, t.full_precision) << ','
         << csv::number(std::abs(s.score - tv), t.full_precision);
    }
    os << "\n";
  }
}

std::unordered_map<std::uint64_t, double> truth_map(const std::vector<PairScore>& truth) {
  std::unordered_map<std::uint64_t, double> m;
  m.reserve(truth.size());
  for (const auto& t : truth) m.emplace(t.pair.packed(), t.score);
  return m;
}

json metrics_json(const JobMetrics& m) {
  json j;
  j["shuffle_size"] = m.shuffle_size;
  j["max_reduce_key"] = m.max_reduce_key;
  if (m.combined_shuffle_size) j["combined_shuffle_size"] = *m.combined_shuffle_size;
  return j;
}

struct GenSynthArgs {
  std::uint32_t docs = 1000, dict = 100, len = 10;
  double skew = 1.0;
  std::uint64_t seed = 0;
  std::string out = "-";
};

struct GenLowerArgs {
  std::uint32_t dict = 100, group_len = 10;
  std::string out = "-";
};

struct StatsArgs {
  std::string input;
  std::optional<std::uint32_t> max_doc_len;
};

struct ExactArgs {
  std::string input, measure = "cosine", out = "-";
  double threshold = 0.0;
  bool full_precision = false;
};

struct DiscoArgs {
  std::string input, measure = "cosine", out = "-", metrics_out;
  std::optional<double> p_over_eps;
  std::optional<double> epsilon;
  std::uint64_t seed = 0;
  unsigned threads = 1, partitions = 0;
  bool with_truth = false, zeros = false, full_precision = false;
};

struct SweepArgs {
  std::string input, measure = "cosine", out = "-";
  std::vector<double> p_over_eps;
  std::vector<double> eps_grid;
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  unsigned threads = 1;
  std::uint32_t gen_docs = 0, gen_dict = 100, gen_len = 10;
  double gen_skew = 1.0;
  std::uint64_t gen_seed = 0;
  bool full_precision = false;
};

struct MinhashArgs {
  std::string input, out = "-", metrics_out, dump_table;
  std::optional<std::uint32_t> k;
  std::optional<double> epsilon;
  double c_factor = 1.0, hash_c = 3.0, threshold = 0.0;
  std::uint64_t seed = 0;
  unsigned threads = 1, partitions = 0;
  bool sampled = false, with_truth = false, full_precision = false;
};

struct StreamArgs {
  std::string input, queries, measure = "cosine", out = "-", metrics_out;
  double p_over_eps = 10.0;
  std::uint64_t seed = 0;
  bool full_precision = false;
};

void run_gen_synth(const GenSynthArgs& a) {
  Corpus c = generate_synthetic(a.docs, a.dict, a.len, a.skew, a.seed);
  OutFile out(a.out);
  write_corpus(c, out.stream());
}

void run_gen_lowerbound(const GenLowerArgs& a) {
  Corpus c = generate_lower_bound(a.dict, a.group_len);
  OutFile out(a.out);
  write_corpus(c, out.stream());
}

void run_stats(const StatsArgs& a) {
  LoadOptions opts;
  opts.max_doc_len = a.max_doc_len;
  Corpus c = load_corpus(a.input, opts);
  json j;
  j["documents"] = c.num_docs();
  j["dict_size"] = c.dict_size();
  j["max_doc_len"] = c.max_doc_len;
  j["tokens_read"] = c.stats.tokens_read;
  j["empty_lines_skipped"] = c.stats.empty_lines_skipped;
  j["duplicates_collapsed"] = c.stats.duplicates_collapsed;
  j["naive_shuffle_size"] = naive_shuffle_size(c);
  std::cout << j.dump(2) << "\n";
}

void run_exact(const ExactArgs& a) {
  Measure m = require_measure(a.measure);
  Corpus c = load_corpus(a.input);
  auto scores = oracle_all_pairs(c, m, a.threshold);
  OutFile out(a.out);
  ScoreTable t{false, a.full_precision, &c};
  write_scores(out.stream(), scores, nullptr, t);
}

void run_disco(const DiscoArgs& a) {
  Measure m = require_sampling_measure(a.measure);
  Corpus c = load_corpus(a.input);
  double r;
  if (a.p_over_eps) {
    r = *a.p_over_eps;
  } else if (a.epsilon) {
    r = default_p_over_eps(c.dict_size(), *a.epsilon);
  } else {
    throw std::invalid_argument("pass --p-over-eps or --epsilon");
  }

  JobOptions opts;
  opts.seed = a.seed;
  opts.threads = a.threads;
  opts.combine_partitions = a.partitions;
  DiscoRun run = disco_pipeline(c, m, r, opts);

  std::optional<std::unordered_map<std::uint64_t, double>> truth;
  if (a.with_truth) {
    auto oracle = oracle_all_pairs(c, m, 0.0);
    if (a.zeros) materialize_zeros(run.estimates, oracle);
    truth = truth_map(oracle);
  }

  OutFile out(a.out);
  ScoreTable t{a.with_truth, a.full_precision, &c};
  write_scores(out.stream(), run.estimates, truth ? &*truth : nullptr, t);

  if (!a.metrics_out.empty()) {
    json j = metrics_json(run.metrics);
    j["measure"] = measure_name(m);
    j["p_over_eps"] = r;
    j["seed"] = a.seed;
    j["naive_shuffle_size"] = naive_shuffle_size(c);
    write_json(j, a.metrics_out);
  }
}

void run_sweep_cmd(const SweepArgs& a) {
  if (a.input.empty() == (a.gen_docs == 0))
    throw std::invalid_argument("pass exactly one corpus source: --input or --gen-docs");
  Corpus c = a.input.empty()
                 ? generate_synthetic(a.gen_docs, a.gen_dict, a.gen_len, a.gen_skew,
                                      a.gen_seed)
                 : load_corpus(a.input);
  ExperimentConfig cfg;
  cfg.measure = require_sampling_measure(a.measure);
  cfg.p_over_eps = a.p_over_eps;
  cfg.eps_grid = a.eps_grid;
  cfg.seeds = a.seeds;
  cfg.threads = a.threads;
  auto rows = run_sweep(c, cfg);

  OutFile out(a.out);
  std::ostream& os = out.stream();
  os << "p_over_eps,shuffle_size,shuffle_ratio,mean_rel_error";
  for (double eps : cfg.eps_grid) os << ",err_ge_" << csv::number(eps);
  os << "\n";
  for (const auto& row : rows) {
    os << csv::number(row.p_over_eps, a.full_precision) << ','
       << csv::number(row.shuffle_size, a.full_precision) << ','
       << csv::number(row.shuffle_ratio, a.full_precision) << ','
       << csv::number(row.mean_rel_error, a.full_precision);
    for (double e : row.threshold_error) os << ',' << csv::number(e, a.full_precision);
    os << "\n";
  }
}

void run_minhash(const MinhashArgs& a) {
  Corpus c = load_corpus(a.input);
  std::uint32_t k;
  if (a.k) {
    if (*a.k == 0) throw std::invalid_argument("--k must be positive");
    k = *a.k;
  } else if (a.epsilon) {
    k = choose_k(*a.epsilon, a.c_factor);
  } else {
    throw std::invalid_argument("pass --k or --epsilon");
  }
  HashFamily family{k, a.seed, a.hash_c};

  JobOptions opts;
  opts.seed = a.seed;
  opts.threads = a.threads;
  opts.combine_partitions = a.partitions;
  MinHashRun run = a.sampled ? minhash_sampled(c, family, opts)
                             : minhash_full(c, family, opts);

  auto pairs = minhash_all_pairs(run.table, a.threshold);
  std::optional<std::unordered_map<std::uint64_t, double>> truth;
  if (a.with_truth) truth = truth_map(oracle_all_pairs(c, Measure::Jaccard, 0.0));

  OutFile out(a.out);
  ScoreTable t{a.with_truth, a.full_precision, &c};
  write_scores(out.stream(), pairs, truth ? &*truth : nullptr, t);

  if (!a.dump_table.empty()) {
    OutFile dump(a.dump_table);
    std::ostream& os = dump.stream();
    os << "word,hash_index,min_value,doc_id\n";
    for (WordId w = 0; w < run.table.dict_size(); ++w)
      for (std::uint32_t j = 0; j < run.table.k(); ++j)
        if (auto cell = run.table.cell(w, j))
          os << csv::field(c.token(w)) << ',' << j << ','
             << csv::number(cell->value, true) << ',' << cell->doc_id << "\n";
  }

  if (!a.metrics_out.empty()) {
    json j = metrics_json(run.metrics);
    std::uint64_t total_words = 0;
    for (const auto& d : c.docs) total_words += d.words.size();
    double dk = std::max(1.0, double(c.dict_size()) * double(k));
    j["k"] = k;
    j["hash_c"] = a.hash_c;
    j["sampled"] = a.sampled;
    j["seed"] = a.seed;
    j["full_shuffle_size"] = std::uint64_t(k) * total_words;
    j["threshold_shuffle_bound"] = double(c.dict_size()) * double(k) * a.hash_c *
                                   std::log(dk);
    j["present_cells"] = run.table.present_cells();
    write_json(j, a.metrics_out);
  }
}

struct StreamQuery {
  std::uint64_t position = 0;
  std::string word_x, word_y;
  std::size_t index = 0;  // original file order, for stable processing
};

void run_stream(const StreamArgs& a) {
  Measure m = require_sampling_measure(a.measure);

  std::vector<StreamQuery> queries;
  {
    std::ifstream qin(a.queries, std::ios::binary);
    if (!qin) throw std::runtime_error("cannot open query file: " + a.queries);
    std::string line;
    std::uint64_t line_no = 0;
    while (std::getline(qin, line)) {
      ++line_no;
      std::istringstream parts(line);
      StreamQuery q;
      q.index = queries.size();
      if (!(parts >> q.position >> q.word_x >> q.word_y)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        throw std::runtime_error("query file line " + std::to_string(line_no) +
                                 ": expected 'position word_x word_y'");
      }
      queries.push_back(std::move(q));
    }
  }
  std::stable_sort(queries.begin(), queries.end(),
                   [](const StreamQuery& x, const StreamQuery& y) {
                     return x.position < y.position;
                   });

  std::ifstream in(a.input, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open corpus file: " + a.input);

  StreamState st(m, a.p_over_eps, a.seed);
  std::unordered_map<std::string, WordId> ids;
  auto intern = [&ids](const std::string& tok) {
    auto [it, fresh] = ids.emplace(tok, WordId(ids.size()));
    (void)fresh;
    return it->second;
  };

  OutFile out(a.out);
  std::ostream& os = out.stream();
  os << "position,word_x,word_y,estimate,status\n";

  auto answer = [&](const StreamQuery& q) {
    os << q.position << ',' << csv::field(q.word_x) << ',' << csv::field(q.word_y) << ',';
    auto ix = ids.find(q.word_x);
    auto iy = ids.find(q.word_y);
    if (ix == ids.end() || iy == ids.end() || st.word_count(ix->second) == 0 ||
        st.word_count(iy->second) == 0) {
      os << ",unseen\n";
      return;
    }
    double est = st.query(ix->second, iy->second,
                          derive_seed(a.seed ^ 0x5157u, q.index));
    os << csv::number(est, a.full_precision) << ",ok\n";
  };

  std::size_t qi = 0;
  std::uint64_t position = 0;  // documents consumed so far
  std::string line;
  std::vector<WordId> words;
  while (true) {
    while (qi < queries.size() && queries[qi].position <= position) answer(queries[qi++]);
    if (!std::getline(in, line)) break;
    words.clear();
    std::istringstream parts(line);
    std::string tok;
    while (parts >> tok) words.push_back(intern(tok));
    if (words.empty()) continue;  // empty lines are not documents
    st.update(words);
    ++position;
  }
  // queries at or past the end of the stream see the final state
  while (qi < queries.size()) answer(queries[qi++]);

  if (!a.metrics_out.empty()) {
    json j;
    j["documents"] = st.docs_seen();
    j["distinct_words"] = st.distinct_words();
    j["bag_entries"] = st.bag_entries();
    j["memory_units"] = st.memory_units();
    if (st.docs_seen() > 0) {
      double lg = std::floor(std::log2(double(st.docs_seen()))) + 1.0;
      j["memory_bound"] = a.p_over_eps * double(st.max_doc_len()) *
                          double(st.distinct_words()) * lg;
    }
    j["measure"] = measure_name(m);
    j["p_over_eps"] = a.p_over_eps;
    j["seed"] = a.seed;
    write_json(j, a.metrics_out);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"all-pairs similarity over a simulated map-shuffle-reduce engine"};
  app.require_subcommand(1);
  app.set_config("--config", "", "read option defaults from a TOML/INI file");

  GenSynthArgs gs;
  auto* cmd_gs = app.add_subcommand("gen-synth", "generate a zipf-distributed corpus");
  cmd_gs->add_option("--docs", gs.docs, "number of documents");
  cmd_gs->add_option("--dict", gs.dict, "dictionary size");
  cmd_gs->add_option("--len", gs.len, "distinct words per document");
  cmd_gs->add_option("--skew", gs.skew, "zipf exponent (0 = uniform)");
  cmd_gs->add_option("--seed", gs.seed, "generator seed")->envname("DISCO_SEED");
  cmd_gs->add_option("--out", gs.out, "output path, - for stdout");
  cmd_gs->callback([&gs] { run_gen_synth(gs); });

  GenLowerArgs gl;
  auto* cmd_gl = app.add_subcommand("gen-lowerbound",
                                    "generate the worst-case grouped corpus");
  cmd_gl->add_option("--dict", gl.dict, "dictionary size");
  cmd_gl->add_option("--group-len", gl.group_len, "words per group (divides --dict)");
  cmd_gl->add_option("--out", gl.out, "output path, - for stdout");
  cmd_gl->callback([&gl] { run_gen_lowerbound(gl); });

  StatsArgs sa;
  auto* cmd_stats = app.add_subcommand("stats", "corpus shape and load statistics");
  cmd_stats->add_option("--input", sa.input, "corpus file")->required();
  cmd_stats->add_option("--max-doc-len", sa.max_doc_len,
                        "reject documents with more distinct words than this");
  cmd_stats->callback([&sa] { run_stats(sa); });

  ExactArgs ea;
  auto* cmd_exact = app.add_subcommand("exact", "brute-force all-pairs scores");
  cmd_exact->add_option("--input", ea.input, "corpus file")->required();
  cmd_exact->add_option("--measure", ea.measure, "cosine|jaccard|overlap|dice");
  cmd_exact->add_option("--threshold", ea.threshold, "keep scores >= threshold");
  cmd_exact->add_flag("--full-precision", ea.full_precision, "17-digit output");
  cmd_exact->add_option("--out", ea.out, "output CSV path, - for stdout");
  cmd_exact->callback([&ea] { run_exact(ea); });

  DiscoArgs da;
  auto* cmd_disco = app.add_subcommand("disco", "sampled all-pairs similarity");
  cmd_disco->add_option("--input", da.input, "corpus file")->required();
  cmd_disco->add_option("--measure", da.measure, "cosine|dice|overlap");
  cmd_disco->add_option("--p-over-eps", da.p_over_eps, "oversampling parameter");
  auto* disco_eps = cmd_disco->add_option("--epsilon", da.epsilon,
                                          "target error; implies p/eps = 2 ln(D)/eps");
  disco_eps->excludes("--p-over-eps");
  cmd_disco->add_option("--seed", da.seed, "job seed")->envname("DISCO_SEED");
  cmd_disco->add_option("--threads", da.threads, "map/reduce parallelism (0 = auto)");
  cmd_disco->add_option("--partitions", da.partitions,
                        "combiner partitions (0 disables the combiner)");
  auto* disco_truth = cmd_disco->add_flag("--with-truth", da.with_truth,
                                          "add exact scores and absolute errors");
  cmd_disco->add_flag("--zeros", da.zeros, "also list truth pairs the sample missed")
      ->needs(disco_truth);
  cmd_disco->add_flag("--full-precision", da.full_precision, "17-digit output");
  cmd_disco->add_option("--out", da.out, "output CSV path, - for stdout");
  cmd_disco->add_option("--metrics-out", da.metrics_out, "write job metrics JSON here");
  cmd_disco->callback([&da] { run_disco(da); });

  SweepArgs wa;
  auto* cmd_sweep = app.add_subcommand("sweep",
                                       "error/shuffle curves over a p/eps grid");
  cmd_sweep->add_option("--input", wa.input, "corpus file");
  cmd_sweep->add_option("--gen-docs", wa.gen_docs,
                        "generate a synthetic corpus with this many documents");
  cmd_sweep->add_option("--gen-dict", wa.gen_dict, "synthetic dictionary size");
  cmd_sweep->add_option("--gen-len", wa.gen_len, "synthetic document length");
  cmd_sweep->add_option("--gen-skew", wa.gen_skew, "synthetic zipf exponent");
  cmd_sweep->add_option("--gen-seed", wa.gen_seed, "synthetic generator seed");
  cmd_sweep->add_option("--measure", wa.measure, "cosine|dice|overlap");
  cmd_sweep->add_option("--p-over-eps", wa.p_over_eps, "grid of p/eps values")
      ->required()
      ->delimiter(',');
  cmd_sweep->add_option("--eps-grid", wa.eps_grid,
                        "similarity thresholds for err_ge_* columns")
      ->delimiter(',');
  cmd_sweep->add_option("--seeds", wa.seeds, "seeds to average over")->delimiter(',');
  cmd_sweep->add_option("--threads", wa.threads, "map/reduce parallelism");
  cmd_sweep->add_flag("--full-precision", wa.full_precision, "17-digit output");
  cmd_sweep->add_option("--out", wa.out, "output CSV path, - for stdout");
  cmd_sweep->callback([&wa] { run_sweep_cmd(wa); });

  MinhashArgs ma;
  auto* cmd_mh = app.add_subcommand("minhash", "jaccard estimates via signatures");
  cmd_mh->add_option("--input", ma.input, "corpus file")->required();
  cmd_mh->add_option("--k", ma.k, "hash functions per family");
  auto* mh_eps = cmd_mh->add_option("--epsilon", ma.epsilon,
                                    "target error; implies k = ceil(c/eps)");
  mh_eps->excludes("--k");
  cmd_mh->add_option("--c-factor", ma.c_factor, "concentration slack for --epsilon");
  cmd_mh->add_option("--hash-c", ma.hash_c, "threshold factor for --sampled");
  cmd_mh->add_flag("--sampled", ma.sampled, "thresholded mapper (drops high hashes)");
  cmd_mh->add_option("--threshold", ma.threshold, "keep estimates >= threshold");
  cmd_mh->add_option("--seed", ma.seed, "hash family master seed")->envname("DISCO_SEED");
  cmd_mh->add_option("--threads", ma.threads, "map/reduce parallelism");
  cmd_mh->add_option("--partitions", ma.partitions, "combiner partitions");
  cmd_mh->add_flag("--with-truth", ma.with_truth, "add exact jaccard and error");
  cmd_mh->add_flag("--full-precision", ma.full_precision, "17-digit output");
  cmd_mh->add_option("--out", ma.out, "output CSV path, - for stdout");
  cmd_mh->add_option("--dump-table", ma.dump_table, "write the signature table CSV here");
  cmd_mh->add_option("--metrics-out", ma.metrics_out, "write job metrics JSON here");
  cmd_mh->callback([&ma] { run_minhash(ma); });

  StreamArgs ta;
  auto* cmd_stream = app.add_subcommand("stream",
                                        "single-pass sketch with mid-stream queries");
  cmd_stream->add_option("--input", ta.input, "corpus file, streamed line by line")
      ->required();
  cmd_stream->add_option("--queries", ta.queries,
                         "query file: lines of 'position word_x word_y'")
      ->required();
  cmd_stream->add_option("--measure", ta.measure, "cosine|dice|overlap");
  cmd_stream->add_option("--p-over-eps", ta.p_over_eps, "oversampling parameter");
  cmd_stream->add_option("--seed", ta.seed, "stream seed")->envname("DISCO_SEED");
  cmd_stream->add_flag("--full-precision", ta.full_precision, "17-digit output");
  cmd_stream->add_option("--out", ta.out, "output CSV path, - for stdout");
  cmd_stream->add_option("--metrics-out", ta.metrics_out, "write sketch metrics here");
  cmd_stream->callback([&ta] { run_stream(ta); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
