// Part-of-speech tagger built on the sequential model.
//
// Known words are tagged by a SNoW network restricted to the tags the word
// carried in training. Unknown words go through the pipeline capitalization
// filter (f1) -> suffix filter (f2) -> contextual SNoW (f3, or f3' which also
// reads the lexical features). In one-vs-all mode one network trains every
// example against all tags and tags unknown words alone over the whole
// alphabet.
#pragma once

#include <chrono>
#include <cstdint>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "seqmodel/core.hpp"
#include "seqmodel/features.hpp"
#include "seqmodel/learners.hpp"
#include "seqmodel/serialization.hpp"
#include "seqmodel/text_format.hpp"

namespace seqm {

enum class TrainingMode { one_vs_all, sm_restricted };
enum class ContextClassifier { f3, f3_prime };

struct TaggerConfig {
  std::vector<std::string> stage_order{"f1", "f2", "f3"};
  std::map<std::string, double> epsilon{{"f1", 0.0}, {"f2", 0.0}, {"f3", 0.0}};
  CombineMode combine = CombineMode::product;
  TrainingMode mode = TrainingMode::sm_restricted;
  ContextClassifier classifier = ContextClassifier::f3_prime;
  WinnowParams winnow{};
  bool baseline_feature = false;
  std::string numeric_pattern{kDefaultNumericPattern};
  std::uint64_t min_support = 1;
  // Training words seen at most this often stand in for unknown words.
  std::size_t unknown_max_freq = 1;
  std::size_t folds = 10;
  std::uint64_t seed = 1;
  std::vector<std::string> alphabet;  // empty: induced from the corpus

  void validate() const {
    static const std::set<std::string> kRegistered{"f1", "f2", "f3"};
    if (stage_order.empty()) throw InvalidInput("stage order is empty");
    std::set<std::string> seen;
    for (const auto& s : stage_order) {
      if (!kRegistered.count(s)) throw InvalidInput("unknown stage '" + s + "' (expected f1, f2 or f3)");
      if (!seen.insert(s).second) throw InvalidInput("stage '" + s + "' listed twice");
    }
    if (!seen.count("f3")) throw InvalidInput("stage order must include f3");
    for (const auto& [name, eps] : epsilon)
      if (!(eps >= 0.0 && eps < 1.0)) throw InvalidInput("threshold for " + name + " must lie in [0,1)");
    winnow.validate();
    if (min_support < 1) throw InvalidInput("min_support must be >= 1");
    if (folds < 2) throw InvalidInput("folds must be >= 2");
  }

  double eps(const std::string& stage) const {
    auto it = epsilon.find(stage);
    return it == epsilon.end() ? 0.0 : it->second;
  }

  std::string f3_view() const { return classifier == ContextClassifier::f3 ? "context" : "all"; }
};

inline std::string_view to_string(TrainingMode m) { return m == TrainingMode::one_vs_all ? "ova" : "sm"; }
inline std::string_view to_string(ContextClassifier c) { return c == ContextClassifier::f3 ? "f3" : "f3p"; }

// ---------------------------------------------------------------------------
// key=value mapping shared by config files and the model file.

inline std::vector<std::pair<std::string, std::string>> config_entries(const TaggerConfig& c) {
  std::string order;
  for (const auto& s : c.stage_order) order += (order.empty() ? "" : ",") + s;
  std::string alphabet;
  for (const auto& s : c.alphabet) alphabet += (alphabet.empty() ? "" : ",") + s;
  return {
      {"stage_order", order},
      {"eps.f1", text::format_double(c.eps("f1"))},
      {"eps.f2", text::format_double(c.eps("f2"))},
      {"eps.f3", text::format_double(c.eps("f3"))},
      {"combine", std::string(to_string(c.combine))},
      {"mode", std::string(to_string(c.mode))},
      {"classifier", std::string(to_string(c.classifier))},
      {"baseline", c.baseline_feature ? "on" : "off"},
      {"numeric_pattern", c.numeric_pattern},
      {"min_support", std::to_string(c.min_support)},
      {"unknown_max_freq", std::to_string(c.unknown_max_freq)},
      {"folds", std::to_string(c.folds)},
      {"seed", std::to_string(c.seed)},
      {"alphabet", alphabet},
      {"winnow.promotion", text::format_double(c.winnow.promotion)},
      {"winnow.demotion", text::format_double(c.winnow.demotion)},
      {"winnow.threshold", text::format_double(c.winnow.threshold)},
      {"winnow.initial_weight", text::format_double(c.winnow.initial_weight)},
      {"winnow.temperature", text::format_double(c.winnow.temperature)},
      {"winnow.max_epochs", std::to_string(c.winnow.max_epochs)},
      {"winnow.demote", c.winnow.demote_all ? "all" : "top"},
  };
}

namespace detail {

inline std::vector<std::string> split_commas(const std::string& v) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : v) {
    if (ch == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

}  // namespace detail

/// Sets one key. Throws InvalidInput for unknown keys or malformed values.
inline void set_config_key(TaggerConfig& c, const std::string& key, const std::string& value) {
  auto real = [&] {
    auto v = text::parse_double(value);
    if (!v) throw InvalidInput("key '" + key + "' expects a number, got '" + value + "'");
    return *v;
  };
  auto whole = [&] {
    auto v = text::parse_int<std::uint64_t>(value);
    if (!v) throw InvalidInput("key '" + key + "' expects a non-negative integer, got '" + value + "'");
    return *v;
  };
  auto choice = [&](std::initializer_list<const char*> allowed) {
    for (const char* a : allowed)
      if (value == a) return;
    throw InvalidInput("key '" + key + "' has invalid value '" + value + "'");
  };

  if (key == "stage_order") {
    c.stage_order = detail::split_commas(value);
  } else if (key.rfind("eps.", 0) == 0) {
    c.epsilon[key.substr(4)] = real();
  } else if (key == "combine") {
    c.combine = parse_combine_mode(value);
  } else if (key == "mode") {
    choice({"ova", "sm"});
    c.mode = value == "ova" ? TrainingMode::one_vs_all : TrainingMode::sm_restricted;
  } else if (key == "classifier") {
    choice({"f3", "f3p"});
    c.classifier = value == "f3" ? ContextClassifier::f3 : ContextClassifier::f3_prime;
  } else if (key == "baseline") {
    choice({"on", "off"});
    c.baseline_feature = value == "on";
  } else if (key == "numeric_pattern") {
    c.numeric_pattern = value;
  } else if (key == "min_support") {
    c.min_support = whole();
  } else if (key == "unknown_max_freq") {
    c.unknown_max_freq = whole();
  } else if (key == "folds") {
    c.folds = whole();
  } else if (key == "seed") {
    c.seed = whole();
  } else if (key == "alphabet") {
    c.alphabet = detail::split_commas(value);
  } else if (key == "winnow.promotion") {
    c.winnow.promotion = real();
  } else if (key == "winnow.demotion") {
    c.winnow.demotion = real();
  } else if (key == "winnow.threshold") {
    c.winnow.threshold = real();
  } else if (key == "winnow.initial_weight") {
    c.winnow.initial_weight = real();
  } else if (key == "winnow.temperature") {
    c.winnow.temperature = real();
  } else if (key == "winnow.max_epochs") {
    c.winnow.max_epochs = static_cast<int>(whole());
  } else if (key == "winnow.demote") {
    choice({"all", "top"});
    c.winnow.demote_all = value == "all";
  } else {
    throw InvalidInput("unknown config key '" + key + "'");
  }
}

// ---------------------------------------------------------------------------

struct TaggerTrainingReport {
  TrainingReport winnow;          // known-word network (the only one in ova mode)
  TrainingReport winnow_unknown;  // sm mode: unknown-word network
  std::size_t tokens = 0;
  std::size_t simulated_unknown = 0;  // examples standing in for unknown words
  std::size_t filtered = 0;           // examples whose gold tag the filters removed
  std::size_t decided = 0;            // sm mode: singleton lexicon sets, not presented to SNoW
  double mean_confusion_set = 0.0;    // known-word sets over all tokens
  double seconds = 0.0;
};

enum class Route { lexicon, numeric, sequential };

struct TaggedToken {
  LabelId tag = 0;
  Route route = Route::lexicon;
  std::optional<ConfusionSet> lexicon_set;  // set for the lexicon route
  std::optional<PredictionTrace> trace;     // set for the sequential route
};

class TrainedTagger {
 public:
  TaggerConfig config;
  Lexicon lexicon;
  LabelAlphabet alphabet;
  std::shared_ptr<FeatureSpace> features;
  std::shared_ptr<const CountClassifier> f1;
  std::shared_ptr<const CountClassifier> f2;
  std::shared_ptr<const SnowNetwork> f3;        // decides unknown words
  std::shared_ptr<const SnowNetwork> f3_known;  // decides known words; same object in ova mode
  SequentialModel unknown_model;  // the pipeline applied to unknown words
  SequentialModel filter_model;   // f1 -> f2 only, for filter diagnostics
  TaggerTrainingReport report;

  /// Feature ids for token i; names never seen in training are dropped.
  SparseExample example(const Sentence& s, std::size_t i, const std::vector<std::string>& left_tags) const {
    auto names = extract_contextual(s, i, left_tags, lexicon, config.baseline_feature);
    auto lexical = extract_lexical(s.tokens[i].surface);
    names.insert(names.end(), lexical.begin(), lexical.end());
    std::vector<FeatureId> ids;
    for (const auto& n : names)
      if (auto id = features->find(n)) ids.push_back(*id);
    return SparseExample::from(std::move(ids));
  }

  std::vector<TaggedToken> tag_sentence(const Sentence& s) const {
    std::vector<TaggedToken> out;
    std::vector<std::string> left;
    const FeatureView& f3_view = *unknown_model.find_view(config.f3_view());
    for (std::size_t i = 0; i < s.size(); ++i) {
      SparseExample x = example(s, i, left);
      TaggedToken tok;
      if (const auto* entry = lexicon.find(s.tokens[i].surface)) {
        std::vector<LabelId> tags;
        for (const auto& [t, n] : entry->tag_counts)
          if (auto id = alphabet.find(t)) tags.push_back(*id);
        ConfusionSet cs(std::move(tags));
        tok.route = Route::lexicon;
        tok.tag = cs.size() == 1 ? *cs.begin() : snow_predict(*f3_known, f3_view.project(x, *features), cs).argmax(cs);
        tok.lexicon_set = std::move(cs);
      } else if (numeric_id_ && numeric_pattern_->matches(s.tokens[i].surface)) {
        tok.route = Route::numeric;
        tok.tag = *numeric_id_;
      } else {
        tok.route = Route::sequential;
        tok.trace = sm_predict(unknown_model, x);
        tok.tag = tok.trace->label;
      }
      left.push_back(alphabet.name(tok.tag));
      out.push_back(std::move(tok));
    }
    return out;
  }

  NumericPattern numeric() const { return NumericPattern(config.numeric_pattern); }

  /// Caches the numeric pattern and the CD label. Called after training or loading.
  void prepare() {
    numeric_pattern_ = std::make_shared<const NumericPattern>(config.numeric_pattern);
    numeric_id_ = alphabet.find(std::string(kNumericTag));
  }

 private:
  std::shared_ptr<const NumericPattern> numeric_pattern_;
  std::optional<LabelId> numeric_id_;
};

namespace detail {

/// FNV-1a; stable across platforms, unlike std::hash.
inline std::uint64_t fnv1a(std::string_view s, std::uint64_t seed) {
  std::uint64_t h = 1469598103934665603ULL ^ (seed * 0x9E3779B97F4A7C15ULL);
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

inline void add_standard_views(SequentialModel& model) {
  model.add_view(FeatureView{"cap", groups::kCapitalization});
  model.add_view(FeatureView{"suffix", groups::kSuffix});
  model.add_view(FeatureView{"context", groups::kContextual});
}

inline const char* view_for(const std::string& stage, const TaggerConfig& cfg) {
  if (stage == "f1") return "cap";
  if (stage == "f2") return "suffix";
  return cfg.classifier == ContextClassifier::f3 ? "context" : "all";
}

inline SequentialModel assemble(const TrainedTagger& t, bool filters_only) {
  SequentialModel m;
  m.alphabet = t.alphabet;
  m.features = t.features;
  m.combine = t.config.combine;
  add_standard_views(m);
  for (const auto& name : t.config.stage_order) {
    std::shared_ptr<const StageClassifier> cls;
    if (name == "f1") cls = t.f1;
    if (name == "f2") cls = t.f2;
    if (name == "f3") {
      if (filters_only) continue;
      cls = t.f3;
    } else if (!filters_only && t.config.mode == TrainingMode::one_vs_all) {
      continue;  // a single classifier decides unknown words in one-vs-all mode
    }
    m.stages.push_back(Stage{name, cls, t.config.eps(name), view_for(name, t.config)});
  }
  return m;
}

}  // namespace detail

/// Trains the lexicon, the two count filters and the SNoW networks.
///
/// Every token yields one SNoW example. In ova mode a single network trains
/// each example against the full alphabet and serves both known and unknown
/// words. In sm mode the known-word network sees the example with the
/// word's lexicon tags as its confusion set (singletons are skipped) and the
/// unknown-word network sees it with the set the filter stages leave. Words
/// seen at most `unknown_max_freq` times stand in for unknown words: their
/// filter set comes from counts with the word's fold of a type-level split
/// held out.
inline TrainedTagger train_tagger(const TaggedCorpus& corpus, const TaggerConfig& cfg) {
  auto start = std::chrono::steady_clock::now();
  cfg.validate();
  if (corpus.empty() || corpus.token_count() == 0) throw InvalidInput("training corpus is empty");

  TrainedTagger t;
  t.config = cfg;
  t.lexicon = build_lexicon(corpus);

  std::vector<std::string> names = cfg.alphabet;
  if (names.empty()) {
    for (const auto& [tag, n] : t.lexicon.tag_frequency()) names.push_back(tag);
  } else {
    std::set<std::string> allowed(names.begin(), names.end());
    for (const auto& [tag, n] : t.lexicon.tag_frequency())
      if (!allowed.count(tag)) throw InvalidInput("tag '" + tag + "' is outside the configured alphabet");
  }
  if (names.size() < 2) {
    // A one-tag corpus still needs a two-label alphabet.
    names.push_back(names.front() == "<unused>" ? "<unused2>" : "<unused>");
    std::sort(names.begin(), names.end());
  }
  t.alphabet = LabelAlphabet(names);
  t.features = std::make_shared<FeatureSpace>();
  const NumericPattern numeric(cfg.numeric_pattern);

  // Words standing in for unknown words, and their folds.
  std::set<std::string> simulated;
  if (cfg.unknown_max_freq > 0)
    for (const auto& [w, e] : t.lexicon.words())
      if (e.count <= cfg.unknown_max_freq && !numeric.matches(w)) simulated.insert(w);
  auto fold_of = [&](const std::string& w) { return detail::fnv1a(w, cfg.seed) % cfg.folds; };

  // Count filters over all tokens, plus per-fold tables of the simulated words.
  auto f1 = std::make_shared<CountClassifier>(t.alphabet, cfg.min_support);
  auto f2 = std::make_shared<CountClassifier>(t.alphabet, cfg.min_support);
  std::vector<CountClassifier> fold_f1(cfg.folds, CountClassifier(t.alphabet, cfg.min_support));
  std::vector<CountClassifier> fold_f2(cfg.folds, CountClassifier(t.alphabet, cfg.min_support));
  for (const auto& s : corpus.sentences)
    for (const auto& tok : s.tokens) {
      LabelId gold = t.alphabet.id(*tok.tag);
      bool sim = simulated.count(tok.surface) > 0;
      for (const auto& name : extract_lexical(tok.surface)) {
        FeatureId f = t.features->intern(name);
        bool cap = FeatureSpace::group_of(name) == "cap";
        (cap ? *f1 : *f2).train(f, gold);
        if (sim) (cap ? fold_f1 : fold_f2)[fold_of(tok.surface)].train(f, gold);
      }
    }
  t.f1 = f1;
  t.f2 = f2;

  // Filter pipelines with one fold held out.
  std::vector<SequentialModel> held_out;
  if (cfg.mode == TrainingMode::sm_restricted && !simulated.empty()) {
    for (std::size_t k = 0; k < cfg.folds; ++k) {
      auto c1 = std::make_shared<CountClassifier>(*f1);
      auto c2 = std::make_shared<CountClassifier>(*f2);
      c1->subtract(fold_f1[k]);
      c2->subtract(fold_f2[k]);
      TrainedTagger tmp;
      tmp.config = cfg;
      tmp.alphabet = t.alphabet;
      tmp.features = t.features;
      tmp.f1 = c1;
      tmp.f2 = c2;
      held_out.push_back(detail::assemble(tmp, true));
    }
  }

  // SNoW example streams. Both modes see the same examples; only the
  // confusion sets differ.
  const ConfusionSet full = ConfusionSet::full(t.alphabet.size());
  FeatureView f3_view{cfg.f3_view(), groups::kContextual};
  const SequentialModel full_filters = detail::assemble(t, true);
  const bool sm = cfg.mode == TrainingMode::sm_restricted;
  std::vector<TrainingExample> known_examples, unknown_examples;
  double cs_total = 0.0;
  for (const auto& s : corpus.sentences) {
    std::vector<std::string> left;
    for (std::size_t i = 0; i < s.size(); ++i) {
      const auto& tok = s.tokens[i];
      auto names = extract_contextual(s, i, left, t.lexicon, cfg.baseline_feature);
      auto lexical = extract_lexical(tok.surface);
      names.insert(names.end(), lexical.begin(), lexical.end());
      std::vector<FeatureId> ids;
      for (const auto& n : names) ids.push_back(t.features->intern(n));
      SparseExample x = SparseExample::from(std::move(ids));
      SparseExample projected = f3_view.selects_all() ? x : f3_view.project(x, *t.features);
      LabelId gold = t.alphabet.id(*tok.tag);
      left.push_back(*tok.tag);

      if (!sm) {
        cs_total += static_cast<double>(full.size());
        known_examples.push_back(TrainingExample{std::move(projected), gold, full});
        continue;
      }

      std::vector<LabelId> tags;
      for (const auto& [tag, n] : t.lexicon.find(tok.surface)->tag_counts) tags.push_back(t.alphabet.id(tag));
      ConfusionSet lex_cs(std::move(tags));
      cs_total += static_cast<double>(lex_cs.size());
      if (lex_cs.size() > 1)
        known_examples.push_back(TrainingExample{projected, gold, lex_cs});
      else
        ++t.report.decided;  // nothing competes; the classifier never sees such a token

      // Unknown-word view of the same token: the filters' survivors, with the
      // word's own fold held out when it stands in for an unknown word.
      bool sim = simulated.count(tok.surface) > 0;
      t.report.simulated_unknown += sim;
      const SequentialModel& filters = sim ? held_out[fold_of(tok.surface)] : full_filters;
      ConfusionSet cs = filters.stages.empty() ? full : sm_predict(filters, x).stages.back().output;
      if (!cs.contains(gold)) {
        ++t.report.filtered;
        continue;
      }
      if (cs.size() > 1) unknown_examples.push_back(TrainingExample{std::move(projected), gold, std::move(cs)});
    }
  }

  auto net = std::make_shared<SnowNetwork>(t.alphabet, cfg.winnow, t.features);
  t.report.winnow = train_epochs(*net, known_examples);
  t.f3_known = net;
  if (sm) {
    auto unknown_net = std::make_shared<SnowNetwork>(t.alphabet, cfg.winnow, t.features);
    t.report.winnow_unknown = train_epochs(*unknown_net, unknown_examples);
    t.f3 = unknown_net;
  } else {
    t.f3 = net;
  }

  t.unknown_model = detail::assemble(t, false);
  t.filter_model = detail::assemble(t, true);
  t.report.tokens = corpus.token_count();
  t.report.mean_confusion_set = cs_total / static_cast<double>(corpus.token_count());
  t.report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  t.prepare();
  return t;
}

// ---------------------------------------------------------------------------
// Model files: SMV1 header, tagger config and lexicon, then the model body
// carrying f1, f2 and f3 as named payloads.

inline constexpr const char* kKnownPayload = "f3.known";

inline void save_tagger(std::ostream& os, const TrainedTagger& t) {
  os << kModelMagic << '\n';
  os << "tagger\n";
  auto entries = config_entries(t.config);
  os << "config " << entries.size() << '\n';
  for (const auto& [k, v] : entries) os << k << ' ' << text::escape(v) << '\n';

  std::vector<std::string> words;
  for (const auto& [w, e] : t.lexicon.words()) words.push_back(w);
  std::sort(words.begin(), words.end());
  os << "lexicon " << words.size() << '\n';
  for (const auto& w : words) {
    const auto& e = *t.lexicon.find(w);
    os << text::escape(w) << ' ' << e.tag_counts.size();
    for (const auto& [tag, n] : e.tag_counts) os << ' ' << text::escape(tag) << ':' << n;
    os << '\n';
  }
  PayloadMap extra{{"f1", t.f1}, {"f2", t.f2}, {"f3", t.f3}};
  if (t.f3_known != t.f3) extra.emplace(kKnownPayload, t.f3_known);
  write_model_body(os, t.unknown_model, extra);
  os << "END\n";
}

inline void save_tagger(const std::string& path, const TrainedTagger& t) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  save_tagger(out, t);
  if (!out) throw Error("write to '" + path + "' failed");
}

inline TrainedTagger load_tagger(std::istream& in, const std::string& source = "<model>") {
  text::LineReader r(in, source);
  expect_magic(r);
  if (r.expect("tagger") != "tagger") r.fail("expected 'tagger' section");

  TrainedTagger t;
  auto count = [&](const char* key) {
    std::string line = r.expect(key);
    auto toks = text::split_ws(line);
    if (toks.size() != 2 || toks[0] != key) r.fail(std::string("expected '") + key + " <n>'");
    return r.integer<std::size_t>(toks[1]);
  };
  std::size_t nconfig = count("config");
  for (std::size_t i = 0; i < nconfig; ++i) {
    std::string line = r.expect("config entry");
    auto toks = text::split_ws(line);
    if (toks.size() != 2) r.fail("expected '<key> <value>'");
    try {
      set_config_key(t.config, std::string(toks[0]), text::unescape(toks[1]));
    } catch (const InvalidInput& e) {
      r.fail(e.what());
    }
  }
  try {
    t.config.validate();
  } catch (const InvalidInput& e) {
    r.fail(e.what());
  }

  std::size_t nwords = count("lexicon");
  for (std::size_t i = 0; i < nwords; ++i) {
    std::string line = r.expect("lexicon entry");
    auto toks = text::split_ws(line);
    if (toks.size() < 2) r.fail("expected '<word> <k> <tag>:<count>...'");
    auto k = r.integer<std::size_t>(toks[1]);
    if (toks.size() != k + 2 || k == 0) r.fail("lexicon entry has wrong number of tags");
    std::string word = text::unescape(toks[0]);
    for (std::size_t j = 0; j < k; ++j) {
      auto colon = toks[j + 2].rfind(':');
      if (colon == std::string_view::npos) r.fail("expected <tag>:<count>");
      t.lexicon.add(word, text::unescape(toks[j + 2].substr(0, colon)),
                    r.integer<std::size_t>(toks[j + 2].substr(colon + 1)));
    }
  }
  t.lexicon.finalize();

  PayloadMap payloads;
  t.unknown_model = read_model_body(r, &payloads);
  expect_trailer(r);

  auto get = [&]<class T>(const char* name, std::shared_ptr<const T>& out) {
    auto it = payloads.find(name);
    if (it == payloads.end()) r.fail(std::string("model is missing classifier ") + name);
    out = std::dynamic_pointer_cast<const T>(it->second);
    if (!out) r.fail(std::string("classifier ") + name + " has the wrong kind");
  };
  get.operator()<CountClassifier>("f1", t.f1);
  get.operator()<CountClassifier>("f2", t.f2);
  get.operator()<SnowNetwork>("f3", t.f3);
  if (payloads.count(kKnownPayload))
    get.operator()<SnowNetwork>(kKnownPayload, t.f3_known);
  else
    t.f3_known = t.f3;
  t.alphabet = t.unknown_model.alphabet;
  t.features = t.unknown_model.features;
  t.filter_model = detail::assemble(t, true);
  t.prepare();
  return t;
}

inline TrainedTagger load_tagger(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open model '" + path + "'");
  return load_tagger(in, path);
}

}  // namespace seqm
