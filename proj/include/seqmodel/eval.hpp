// Tagging accuracy by token class, confusion-set statistics, and the
// training-cost comparison between one-vs-all and restricted training.
#pragma once

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdint>
#include <exception>
#include <iomanip>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <utility>
#include <vector>

#include "seqmodel/core.hpp"
#include "seqmodel/features.hpp"
#include "seqmodel/tagger.hpp"

namespace seqm {

/// Sentence-level split after a seeded shuffle; the test side gets
/// round(fraction * n) sentences, at least one when the corpus has two or more.
inline std::pair<TaggedCorpus, TaggedCorpus> split_corpus(const TaggedCorpus& corpus, double test_fraction,
                                                          std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) throw InvalidInput("test fraction must lie in (0,1)");
  std::vector<std::size_t> order(corpus.sentences.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  auto n_test = static_cast<std::size_t>(std::llround(test_fraction * static_cast<double>(order.size())));
  if (order.size() >= 2) n_test = std::clamp<std::size_t>(n_test, 1, order.size() - 1);
  std::sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_test));
  std::sort(order.begin() + static_cast<std::ptrdiff_t>(n_test), order.end());
  TaggedCorpus train, test;
  for (std::size_t i = 0; i < order.size(); ++i)
    (i < n_test ? test : train).sentences.push_back(corpus.sentences[order[i]]);
  return {std::move(train), std::move(test)};
}

enum class TokenClass : std::size_t { known = 0, unknown = 1, numeric = 2 };
inline constexpr std::size_t kTokenClasses = 3;

inline std::string_view to_string(TokenClass c) {
  switch (c) {
    case TokenClass::known: return "known";
    case TokenClass::unknown: return "unknown";
    default: return "numeric";
  }
}

/// Gold-by-predicted counts. The extra last row holds gold tags outside the
/// alphabet, which are always wrong.
class ConfusionMatrix {
 public:
  ConfusionMatrix() = default;
  explicit ConfusionMatrix(std::size_t labels) : m_(labels), cells_((labels + 1) * labels, 0) {}

  void add(std::optional<LabelId> gold, LabelId predicted, std::uint64_t n = 1) {
    std::size_t row = gold ? *gold : m_;
    cells_[row * m_ + predicted] += n;
  }
  std::uint64_t at(std::size_t row, std::size_t col) const { return cells_[row * m_ + col]; }
  std::size_t labels() const noexcept { return m_; }

  std::uint64_t total() const {
    std::uint64_t t = 0;
    for (auto c : cells_) t += c;
    return t;
  }
  std::uint64_t correct() const {
    std::uint64_t t = 0;
    for (std::size_t c = 0; c < m_; ++c) t += at(c, c);
    return t;
  }

  ConfusionMatrix& operator+=(const ConfusionMatrix& o) {
    if (cells_.empty()) *this = ConfusionMatrix(o.m_);
    for (std::size_t i = 0; i < cells_.size(); ++i) cells_[i] += o.cells_[i];
    return *this;
  }
  bool operator==(const ConfusionMatrix&) const = default;

  void write(std::ostream& os, const LabelAlphabet& alphabet) const {
    for (std::size_t r = 0; r <= m_; ++r)
      for (std::size_t c = 0; c < m_; ++c)
        if (at(r, c) > 0)
          os << "confusion " << (r < m_ ? alphabet.name(static_cast<LabelId>(r)) : std::string("<oov>")) << ' '
             << alphabet.name(static_cast<LabelId>(c)) << ' ' << at(r, c) << '\n';
  }

 private:
  std::size_t m_ = 0;
  std::vector<std::uint64_t> cells_;
};

struct StageStats {
  std::string name;
  std::uint64_t tokens = 0;
  std::uint64_t set_size_sum = 0;
  std::uint64_t gold_survived = 0;

  double mean_set_size() const { return tokens ? static_cast<double>(set_size_sum) / static_cast<double>(tokens) : 0.0; }
  std::optional<double> survival() const {
    if (!tokens) return std::nullopt;
    return static_cast<double>(gold_survived) / static_cast<double>(tokens);
  }
};

struct EvalReport {
  std::uint64_t total = 0;
  std::array<std::uint64_t, kTokenClasses> count{};
  std::array<std::uint64_t, kTokenClasses> correct{};
  std::uint64_t out_of_alphabet = 0;  // gold tags the tagger cannot emit
  std::array<ConfusionMatrix, kTokenClasses> confusion;
  std::vector<StageStats> stages;  // unknown-word pipeline stages, in order
  StageStats filters;              // f1 then f2 on unknown words, gold survival
  TaggerTrainingReport training;
  double seconds = 0.0;

  std::uint64_t tokens(TokenClass c) const { return count[static_cast<std::size_t>(c)]; }

  /// Undefined (nullopt) when the class has no tokens.
  std::optional<double> accuracy(TokenClass c) const {
    auto i = static_cast<std::size_t>(c);
    if (!count[i]) return std::nullopt;
    return static_cast<double>(correct[i]) / static_cast<double>(count[i]);
  }
  std::optional<double> overall() const {
    if (!total) return std::nullopt;
    std::uint64_t c = correct[0] + correct[1] + correct[2];
    return static_cast<double>(c) / static_cast<double>(total);
  }

  /// Same accuracy recomputed from the confusion matrix.
  std::optional<double> matrix_accuracy(TokenClass c) const {
    const auto& m = confusion[static_cast<std::size_t>(c)];
    if (!m.total()) return std::nullopt;
    return static_cast<double>(m.correct()) / static_cast<double>(m.total());
  }

  double tokens_per_second() const { return seconds > 0.0 ? static_cast<double>(total) / seconds : 0.0; }

  bool consistent() const { return count[0] + count[1] + count[2] == total; }

  EvalReport& operator+=(const EvalReport& o) {
    total += o.total;
    out_of_alphabet += o.out_of_alphabet;
    for (std::size_t i = 0; i < kTokenClasses; ++i) {
      count[i] += o.count[i];
      correct[i] += o.correct[i];
      confusion[i] += o.confusion[i];
    }
    if (stages.empty()) stages = o.stages;
    else
      for (std::size_t i = 0; i < stages.size(); ++i) {
        stages[i].tokens += o.stages[i].tokens;
        stages[i].set_size_sum += o.stages[i].set_size_sum;
        stages[i].gold_survived += o.stages[i].gold_survived;
      }
    filters.tokens += o.filters.tokens;
    filters.set_size_sum += o.filters.set_size_sum;
    filters.gold_survived += o.filters.gold_survived;
    return *this;
  }
};

namespace detail {

inline EvalReport evaluate_range(const TrainedTagger& t, const TaggedCorpus& test, std::size_t begin,
                                 std::size_t end) {
  EvalReport r;
  for (auto& m : r.confusion) m = ConfusionMatrix(t.alphabet.size());
  for (const auto& st : t.unknown_model.stages) r.stages.push_back(StageStats{st.name});
  r.filters.name = "f1+f2";
  const NumericPattern numeric = t.numeric();

  for (std::size_t si = begin; si < end; ++si) {
    const Sentence& s = test.sentences[si];
    auto tagged = t.tag_sentence(s);
    for (std::size_t i = 0; i < s.size(); ++i) {
      const auto& tok = s.tokens[i];
      TokenClass cls = t.lexicon.contains(tok.surface) ? TokenClass::known
                       : numeric.matches(tok.surface)  ? TokenClass::numeric
                                                       : TokenClass::unknown;
      auto ci = static_cast<std::size_t>(cls);
      std::optional<LabelId> gold = tok.tag ? t.alphabet.find(*tok.tag) : std::nullopt;
      if (!gold) ++r.out_of_alphabet;
      ++r.total;
      ++r.count[ci];
      r.correct[ci] += gold && *gold == tagged[i].tag;
      r.confusion[ci].add(gold, tagged[i].tag);

      if (cls != TokenClass::unknown || !gold) continue;
      if (tagged[i].trace)
        for (std::size_t k = 0; k < tagged[i].trace->stages.size(); ++k) {
          const auto& out = tagged[i].trace->stages[k].output;
          ++r.stages[k].tokens;
          r.stages[k].set_size_sum += out.size();
          r.stages[k].gold_survived += out.contains(*gold);
        }
      if (!t.filter_model.stages.empty()) {
        std::vector<std::string> left;
        for (std::size_t j = 0; j < i; ++j) left.push_back(t.alphabet.name(tagged[j].tag));
        auto trace = sm_predict(t.filter_model, t.example(s, i, left));
        ++r.filters.tokens;
        r.filters.set_size_sum += trace.stages.back().output.size();
        r.filters.gold_survived += trace.stages.back().output.contains(*gold);
      }
    }
  }
  return r;
}

}  // namespace detail

/// Tags every sentence and aggregates accuracy by token class. A token is
/// known if it is in the lexicon, numeric if it matches the numeric pattern,
/// and unknown otherwise. Work is split across `threads` contiguous blocks
/// of sentences; all aggregates are integer sums, so the result does not
/// depend on the thread count.
inline EvalReport evaluate(const TrainedTagger& t, const TaggedCorpus& test, unsigned threads = 1) {
  if (test.empty()) throw InvalidInput("evaluate: empty test corpus");
  auto start = std::chrono::steady_clock::now();
  const std::size_t n = test.sentences.size();
  threads = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(n)));
  std::vector<EvalReport> parts(threads);
  std::vector<std::exception_ptr> errors(threads);
  {
    std::vector<std::jthread> pool;
    for (unsigned k = 0; k < threads; ++k)
      pool.emplace_back([&, k] {
        try {
          parts[k] = detail::evaluate_range(t, test, n * k / threads, n * (k + 1) / threads);
        } catch (...) {
          errors[k] = std::current_exception();
        }
      });
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  EvalReport r;
  for (const auto& p : parts) r += p;
  r.training = t.report;
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

/// Fraction of tokens whose gold tag survives the filter stages, with the
/// filters applied to every token of `corpus` (lexical features only).
inline StageStats filter_survival(const TrainedTagger& t, const TaggedCorpus& corpus) {
  StageStats s{"f1+f2"};
  if (t.filter_model.stages.empty()) return s;
  for (const auto& sent : corpus.sentences)
    for (const auto& tok : sent.tokens) {
      auto gold = tok.tag ? t.alphabet.find(*tok.tag) : std::nullopt;
      if (!gold) continue;
      std::vector<FeatureId> ids;
      for (const auto& name : extract_lexical(tok.surface))
        if (auto id = t.features->find(name)) ids.push_back(*id);
      auto trace = sm_predict(t.filter_model, SparseExample::from(std::move(ids)));
      ++s.tokens;
      s.set_size_sum += trace.stages.back().output.size();
      s.gold_survived += trace.stages.back().output.contains(*gold);
    }
  return s;
}

// ---------------------------------------------------------------------------
// Reports

namespace detail {

inline std::string percent(std::optional<double> v) {
  if (!v) return "n/a";
  std::ostringstream os;
  os << std::fixed << std::setprecision(2) << 100.0 * *v;
  return os.str();
}

inline std::string value(std::optional<double> v) {
  if (!v) return "undefined";
  std::ostringstream os;
  os << std::setprecision(6) << *v;
  return os.str();
}

}  // namespace detail

inline void print_report(std::ostream& os, const EvalReport& r) {
  os << std::left << std::setw(10) << "tokens" << std::setw(10) << "count" << "accuracy%\n";
  for (std::size_t i = 0; i < kTokenClasses; ++i) {
    auto c = static_cast<TokenClass>(i);
    os << std::setw(10) << to_string(c) << std::setw(10) << r.count[i] << detail::percent(r.accuracy(c)) << '\n';
  }
  os << std::setw(10) << "all" << std::setw(10) << r.total << detail::percent(r.overall()) << '\n';
  if (r.out_of_alphabet) os << "gold tags outside the alphabet: " << r.out_of_alphabet << '\n';
  if (!r.stages.empty()) {
    os << "\nunknown-word stages\n" << std::setw(10) << "stage" << std::setw(14) << "mean |C_i|" << "gold kept%\n";
    for (const auto& s : r.stages)
      os << std::setw(10) << s.name << std::setw(14) << std::setprecision(4) << s.mean_set_size()
         << detail::percent(s.survival()) << '\n';
  }
  os << "\ntraining: " << r.training.winnow.total_updates << " node-updates over " << r.training.winnow.epochs()
     << " epochs, " << std::setprecision(4) << r.training.seconds << " s\n";
  os << "tagging: " << std::setprecision(6) << r.tokens_per_second() << " tokens/s\n";
}

inline void print_records(std::ostream& os, const EvalReport& r) {
  os << "tokens.total=" << r.total << '\n';
  for (std::size_t i = 0; i < kTokenClasses; ++i) {
    auto c = static_cast<TokenClass>(i);
    os << "tokens." << to_string(c) << '=' << r.count[i] << '\n';
    os << "accuracy." << to_string(c) << '=' << detail::value(r.accuracy(c)) << '\n';
  }
  os << "accuracy.all=" << detail::value(r.overall()) << '\n';
  os << "tokens.out_of_alphabet=" << r.out_of_alphabet << '\n';
  for (const auto& s : r.stages) {
    os << "stage." << s.name << ".mean_set=" << s.mean_set_size() << '\n';
    os << "stage." << s.name << ".gold_survival=" << detail::value(s.survival()) << '\n';
  }
  os << "filters.gold_survival=" << detail::value(r.filters.survival()) << '\n';
  os << "train.updates=" << r.training.winnow.total_updates << '\n';
  os << "train.epochs=" << r.training.winnow.epochs() << '\n';
  os << "train.seconds=" << r.training.seconds << '\n';
  os << "tag.tokens_per_second=" << r.tokens_per_second() << '\n';
}

// ---------------------------------------------------------------------------
// Training-cost comparison

struct ModeRun {
  std::size_t updates = 0;        // mistake-driven weight-vector updates
  std::size_t presentations = 0;  // nodes scored per example, summed
  std::size_t examples = 0;
  double snow_seconds = 0.0;   // median over runs, SNoW training only
  double total_seconds = 0.0;  // median over runs, whole train_tagger call
  double mean_confusion_set = 0.0;
};

struct BenchReport {
  ModeRun ova;
  ModeRun sm;
  int runs = 0;

  /// Node-updates counted as nodes touched per example.
  double update_ratio() const {
    return ova.presentations ? static_cast<double>(sm.presentations) / static_cast<double>(ova.presentations) : 0.0;
  }
  /// Ratio of mistake-driven weight updates only.
  double mistake_ratio() const {
    return ova.updates ? static_cast<double>(sm.updates) / static_cast<double>(ova.updates) : 0.0;
  }
  double speedup() const { return sm.snow_seconds > 0.0 ? ova.snow_seconds / sm.snow_seconds : 0.0; }
};

namespace detail {

inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

inline ModeRun run_mode(const TaggedCorpus& corpus, TaggerConfig cfg, TrainingMode mode, int runs) {
  cfg.mode = mode;
  ModeRun out;
  std::vector<double> snow, total;
  for (int i = 0; i < runs; ++i) {
    TrainedTagger t = train_tagger(corpus, cfg);
    snow.push_back(t.report.winnow.seconds);
    total.push_back(t.report.seconds);
    out.updates = t.report.winnow.total_updates;  // deterministic, identical every run
    out.presentations = t.report.winnow.presentations;
    out.examples = t.report.winnow.examples;
    out.mean_confusion_set = t.report.mean_confusion_set;
  }
  out.snow_seconds = median(snow);
  out.total_seconds = median(total);
  return out;
}

}  // namespace detail

/// Trains the same corpus and configuration in both modes, sequentially,
/// `runs` times each; times are medians.
inline BenchReport bench_training(const TaggedCorpus& corpus, const TaggerConfig& cfg, int runs = 3) {
  if (runs < 1) throw InvalidInput("bench needs at least one run");
  BenchReport r;
  r.runs = runs;
  r.ova = detail::run_mode(corpus, cfg, TrainingMode::one_vs_all, runs);
  r.sm = detail::run_mode(corpus, cfg, TrainingMode::sm_restricted, runs);
  return r;
}

inline void print_bench(std::ostream& os, const BenchReport& r) {
  os << std::left << std::setw(6) << "mode" << std::setw(12) << "examples" << std::setw(14) << "node-updates"
     << std::setw(12) << "mistakes" << std::setw(12) << "snow s" << std::setw(12) << "train s" << "mean |C|\n";
  for (auto [name, m] : {std::pair{"ova", &r.ova}, std::pair{"sm", &r.sm}})
    os << std::setw(6) << name << std::setw(12) << m->examples << std::setw(14) << m->presentations << std::setw(12)
       << m->updates << std::setw(12) << std::setprecision(4) << m->snow_seconds << std::setw(12) << m->total_seconds
       << m->mean_confusion_set << '\n';
  os << "node-update ratio sm/ova: " << std::setprecision(4) << r.update_ratio() << "\n";
  os << "mistake-driven update ratio sm/ova: " << r.mistake_ratio() << "\n";
  os << "speedup ova/sm (median of " << r.runs << "): " << r.speedup() << "x\n";
  os << "(snow s: known-word network; train s also covers the filters and, in sm mode, the unknown-word network)\n";
}

inline void print_bench_records(std::ostream& os, const BenchReport& r) {
  for (auto [name, m] : {std::pair{"ova", &r.ova}, std::pair{"sm", &r.sm}}) {
    os << "bench." << name << ".examples=" << m->examples << '\n';
    os << "bench." << name << ".node_updates=" << m->presentations << '\n';
    os << "bench." << name << ".mistake_updates=" << m->updates << '\n';
    os << "bench." << name << ".snow_seconds=" << m->snow_seconds << '\n';
    os << "bench." << name << ".total_seconds=" << m->total_seconds << '\n';
    os << "bench." << name << ".mean_confusion_set=" << m->mean_confusion_set << '\n';
  }
  os << "bench.update_ratio=" << r.update_ratio() << '\n';
  os << "bench.mistake_ratio=" << r.mistake_ratio() << '\n';
  os << "bench.speedup=" << r.speedup() << '\n';
}

// ---------------------------------------------------------------------------
// Side-by-side unknown-word comparison of classifier/mode combinations

struct ConfigurationRow {
  std::string name;
  TrainingMode mode;
  ContextClassifier classifier;
  EvalReport report;
};

/// f3, f3', SM(f1,f2,f3) and SM(f1,f2,f3') trained on `train`, scored on `test`.
inline std::vector<ConfigurationRow> compare_configurations(const TaggedCorpus& train, const TaggedCorpus& test,
                                                            const TaggerConfig& base, unsigned threads = 1) {
  const std::vector<std::tuple<std::string, TrainingMode, ContextClassifier>> rows{
      {"f3", TrainingMode::one_vs_all, ContextClassifier::f3},
      {"f3'", TrainingMode::one_vs_all, ContextClassifier::f3_prime},
      {"SM(f1,f2,f3)", TrainingMode::sm_restricted, ContextClassifier::f3},
      {"SM(f1,f2,f3')", TrainingMode::sm_restricted, ContextClassifier::f3_prime},
  };
  std::vector<ConfigurationRow> out;
  for (const auto& [name, mode, cls] : rows) {
    TaggerConfig cfg = base;
    cfg.mode = mode;
    cfg.classifier = cls;
    TrainedTagger t = train_tagger(train, cfg);
    out.push_back(ConfigurationRow{name, mode, cls, evaluate(t, test, threads)});
  }
  return out;
}

}  // namespace seqm
