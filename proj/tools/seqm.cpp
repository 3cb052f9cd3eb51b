// seqm: train, tag, evaluate and benchmark the sequential-model tagger, run
// the theory checks, and convert decision trees.
//
// Exit status: 0 success, 1 usage error, 2 data error, 3 verification failure.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "seqmodel/config.hpp"
#include "seqmodel/decision_tree.hpp"
#include "seqmodel/eval.hpp"
#include "seqmodel/serialization.hpp"
#include "seqmodel/synthetic.hpp"
#include "seqmodel/tagger.hpp"
#include "seqmodel/theory.hpp"

namespace {

constexpr int kUsage = 1;
constexpr int kData = 2;
constexpr int kVerification = 3;

struct VerificationFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> mode, classifier, baseline;

  void add(CLI::App* app) {
    app->add_option("--seed", seed, "Seed for the split and the fold assignment");
    app->add_option("--mode", mode, "Training mode")->check(CLI::IsMember({"ova", "sm"}));
    app->add_option("--classifier", classifier, "Context classifier: f3 (contextual) or f3p (all features)")
        ->check(CLI::IsMember({"f3", "f3p"}));
    app->add_option("--baseline", baseline, "Baseline-tag feature")->check(CLI::IsMember({"on", "off"}));
  }

  void apply(seqm::RunConfig& c) const {
    if (seed) {
      c.tagger.seed = *seed;
      c.split_seed = *seed;
    }
    if (mode) seqm::set_config_key(c.tagger, "mode", *mode);
    if (classifier) seqm::set_config_key(c.tagger, "classifier", *classifier);
    if (baseline) seqm::set_config_key(c.tagger, "baseline", *baseline);
  }
};

seqm::TaggedCorpus load_corpus(const std::string& path, bool require_tags = true) {
  std::ifstream in(path);
  if (!in) throw seqm::Error("cannot open corpus '" + path + "'");
  return seqm::read_corpus(in, path, require_tags);
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw seqm::Error("cannot open '" + path + "' for writing");
  return out;
}

seqm::RunConfig run_config(const std::string& config_path, const Overrides& o) {
  seqm::RunConfig c = config_path.empty() ? seqm::RunConfig{} : seqm::load_config(config_path);
  o.apply(c);
  c.tagger.validate();
  return c;
}

unsigned default_threads() { return std::max(1U, std::thread::hardware_concurrency()); }

std::string set_string(const seqm::ConfusionSet& cs, const seqm::LabelAlphabet& a) {
  std::string s = "{";
  for (seqm::LabelId c : cs) s += (s.size() > 1 ? "," : "") + a.name(c);
  return s + "}";
}

// ---------------------------------------------------------------------------

int cmd_train(const std::string& corpus_path, const std::string& config_path, const std::string& out_path,
              const Overrides& o) {
  auto cfg = run_config(config_path, o);
  auto corpus = load_corpus(corpus_path);
  auto tagger = seqm::train_tagger(corpus, cfg.tagger);
  seqm::save_tagger(out_path, tagger);
  const auto& r = tagger.report;
  std::cout << "trained on " << r.tokens << " tokens, " << tagger.lexicon.size() << " word types, "
            << tagger.alphabet.size() << " tags\n"
            << "mode=" << seqm::to_string(cfg.tagger.mode) << " classifier=" << seqm::to_string(cfg.tagger.classifier)
            << '\n'
            << "known-word network: " << r.winnow.total_updates << " updates over " << r.winnow.epochs()
            << " epochs (" << r.winnow.examples << " examples)\n";
  if (cfg.tagger.mode == seqm::TrainingMode::sm_restricted)
    std::cout << "unknown-word network: " << r.winnow_unknown.total_updates << " updates over "
              << r.winnow_unknown.epochs() << " epochs (" << r.winnow_unknown.examples << " examples)\n";
  std::cout << "simulated unknown tokens: " << r.simulated_unknown << ", filtered: " << r.filtered << '\n'
            << "seconds: " << r.seconds << '\n'
            << "model written to " << out_path << '\n';
  return 0;
}

int cmd_tag(const std::string& model_path, const std::string& input_path, const std::string& output_path,
            bool trace, unsigned threads) {
  std::ifstream min(model_path);
  if (!min) throw seqm::Error("cannot open model '" + model_path + "'");
  auto tagger = seqm::load_tagger(min, model_path);
  auto input = load_corpus(input_path, false);

  const std::size_t n = input.sentences.size();
  std::vector<std::string> rendered(n);
  threads = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  {
    std::vector<std::jthread> pool;
    for (unsigned k = 0; k < threads; ++k)
      pool.emplace_back([&, k] {
        for (std::size_t i = n * k / threads; i < n * (k + 1) / threads; ++i) {
          const auto& s = input.sentences[i];
          auto tags = tagger.tag_sentence(s);
          std::ostringstream os;
          for (std::size_t j = 0; j < s.size(); ++j) {
            os << s.tokens[j].surface << '\t' << tagger.alphabet.name(tags[j].tag) << '\n';
            if (!trace) continue;
            os << "# " << s.tokens[j].surface << " route=";
            switch (tags[j].route) {
              case seqm::Route::lexicon: os << "lexicon set=" << set_string(*tags[j].lexicon_set, tagger.alphabet); break;
              case seqm::Route::numeric: os << "numeric"; break;
              case seqm::Route::sequential: os << "sequential"; break;
            }
            if (tags[j].trace)
              for (std::size_t k2 = 0; k2 < tags[j].trace->stages.size(); ++k2)
                os << ' ' << tagger.unknown_model.stages[k2].name << '='
                   << set_string(tags[j].trace->stages[k2].output, tagger.alphabet);
            os << '\n';
          }
          os << '\n';
          rendered[i] = os.str();
        }
      });
  }
  auto out = open_out(output_path);
  for (const auto& r : rendered) out << r;
  if (!out) throw seqm::Error("write to '" + output_path + "' failed");
  return 0;
}

int cmd_eval(const std::string& model_path, const std::string& test_path, const std::string& corpus_path,
             const std::string& config_path, bool compare, bool records, unsigned threads, const Overrides& o) {
  if (!model_path.empty()) {
    if (test_path.empty()) throw CLI::ValidationError("--model needs --test");
    std::ifstream min(model_path);
    if (!min) throw seqm::Error("cannot open model '" + model_path + "'");
    auto tagger = seqm::load_tagger(min, model_path);
    auto report = seqm::evaluate(tagger, load_corpus(test_path), threads);
    records ? seqm::print_records(std::cout, report) : seqm::print_report(std::cout, report);
    return 0;
  }
  if (corpus_path.empty()) throw CLI::ValidationError("eval needs --model and --test, or --corpus");
  auto cfg = run_config(config_path, o);
  auto [train, test] = seqm::split_corpus(load_corpus(corpus_path), cfg.test_fraction, cfg.split_seed);
  std::cout << (records ? "# " : "") << "split seed " << cfg.split_seed << ": " << train.sentences.size()
            << " training and " << test.sentences.size() << " test sentences\n";
  if (!compare) {
    auto tagger = seqm::train_tagger(train, cfg.tagger);
    auto report = seqm::evaluate(tagger, test, threads);
    records ? seqm::print_records(std::cout, report) : seqm::print_report(std::cout, report);
    return 0;
  }
  auto rows = seqm::compare_configurations(train, test, cfg.tagger, threads);
  if (records) {
    for (const auto& r : rows) {
      std::cout << "config." << r.name << ".unknown=" << seqm::detail::value(r.report.accuracy(seqm::TokenClass::unknown))
                << '\n'
                << "config." << r.name << ".known=" << seqm::detail::value(r.report.accuracy(seqm::TokenClass::known))
                << '\n';
    }
    return 0;
  }
  std::cout << std::left << std::setw(16) << "configuration" << std::setw(14) << "unknown%" << std::setw(12)
            << "known%" << "unknown tokens\n";
  for (const auto& r : rows)
    std::cout << std::setw(16) << r.name << std::setw(14)
              << seqm::detail::percent(r.report.accuracy(seqm::TokenClass::unknown)) << std::setw(12)
              << seqm::detail::percent(r.report.accuracy(seqm::TokenClass::known))
              << r.report.tokens(seqm::TokenClass::unknown) << '\n';
  return 0;
}

int cmd_bench(const std::string& corpus_path, const std::string& config_path, bool synthetic,
              std::size_t sentences, int runs, bool records, const Overrides& o) {
  seqm::RunConfig cfg;
  seqm::TaggedCorpus corpus;
  if (synthetic) {
    // Known-word training cost on 50 tags with contextual features.
    cfg.tagger.classifier = seqm::ContextClassifier::f3;
    cfg.tagger.unknown_max_freq = 0;
    if (!config_path.empty()) cfg = seqm::load_config(config_path);
    o.apply(cfg);
    seqm::synth::AmbiguityOptions opt;
    opt.sentences = sentences;
    opt.seed = cfg.split_seed;
    corpus = seqm::synth::ambiguity_corpus(opt);
  } else {
    if (corpus_path.empty()) throw CLI::ValidationError("bench needs --corpus or --synthetic");
    cfg = run_config(config_path, o);
    corpus = load_corpus(corpus_path);
  }
  auto report = seqm::bench_training(corpus, cfg.tagger, runs);
  records ? seqm::print_bench_records(std::cout, report) : seqm::print_bench(std::cout, report);
  return 0;
}

int cmd_verify(std::uint64_t seed) {
  bool ok = true;
  for (const auto& c : seqm::theory::run_verification(seed)) {
    std::cout << seqm::theory::format_check(c) << '\n';
    ok &= c.passed;
  }
  if (!ok) throw VerificationFailure("verification failed");
  return 0;
}

int cmd_convert_dt(const std::string& tree_path, const std::string& out_path) {
  std::ifstream in(tree_path);
  if (!in) throw seqm::Error("cannot open tree '" + tree_path + "'");
  auto tree = seqm::read_tree(in, tree_path);
  auto model = seqm::dt_to_sm(tree);
  {
    auto out = open_out(out_path);
    seqm::write_model(out, model);
  }
  std::cout << "internal nodes: " << tree.internal_count() << ", stages: " << model.stages.size() << '\n';
  std::uint32_t bits = tree.bit_width();
  if (bits > 20) {
    std::cout << "equivalence: not checked (" << bits << " input bits)\n";
    return 0;
  }
  auto rep = seqm::theory::dt_equivalence_check(tree, model, bits);
  if (!rep.exact()) {
    std::cout << "equivalence: FAILED (" << rep.mismatches << " of " << rep.inputs << " inputs differ)\n";
    throw VerificationFailure("decision-tree conversion is not equivalent");
  }
  std::cout << "equivalence: exact (" << rep.inputs << " inputs)\n";
  return 0;
}

int cmd_gen_corpus(const std::string& kind, std::size_t sentences, std::uint64_t seed, const std::string& out_path) {
  seqm::TaggedCorpus corpus;
  if (kind == "english") {
    seqm::synth::EnglishLikeOptions opt;
    opt.sentences = sentences;
    opt.seed = seed;
    corpus = seqm::synth::english_like_corpus(opt);
  } else {
    seqm::synth::AmbiguityOptions opt;
    opt.sentences = sentences;
    opt.seed = seed;
    corpus = seqm::synth::ambiguity_corpus(opt);
  }
  auto out = open_out(out_path);
  seqm::write_corpus(out, corpus);
  std::cout << "wrote " << corpus.sentences.size() << " sentences, " << corpus.token_count() << " tokens to "
            << out_path << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sequential-model classifier cascade and POS tagger"};
  app.require_subcommand(1);

  std::string corpus, config, out, model, input, output, test, tree, kind = "english";
  bool trace = false, compare = false, records = false, synthetic = false;
  unsigned threads = default_threads();
  unsigned bench_threads = 1;
  int runs = 3;
  std::size_t sentences = 3000;
  std::uint64_t seed = 1;
  Overrides train_o, eval_o, bench_o;

  auto* train = app.add_subcommand("train", "Train a tagger and write an SMV1 model");
  train->add_option("--corpus", corpus, "Tagged corpus (word<TAB>tag)")->required();
  train->add_option("--config", config, "key=value configuration file");
  train->add_option("--out", out, "Model output path")->required();
  train_o.add(train);

  auto* tag = app.add_subcommand("tag", "Tag a corpus with a trained model");
  tag->add_option("--model", model, "SMV1 model")->required();
  tag->add_option("--input", input, "Input in corpus format; tags are ignored")->required();
  tag->add_option("--output", output, "Tagged output path")->required();
  tag->add_flag("--trace", trace, "Append confusion-set traces as comment lines");
  tag->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);

  auto* eval = app.add_subcommand("eval", "Accuracy by token class");
  eval->add_option("--model", model, "SMV1 model to evaluate");
  eval->add_option("--test", test, "Tagged test corpus for --model");
  eval->add_option("--corpus", corpus, "Tagged corpus to split, train on and evaluate");
  eval->add_option("--config", config, "key=value configuration file");
  eval->add_flag("--compare", compare, "Compare f3, f3', SM(f1,f2,f3) and SM(f1,f2,f3') on unknown words");
  eval->add_flag("--records", records, "key=value output");
  eval->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
  eval_o.add(eval);

  auto* bench = app.add_subcommand("bench", "Compare one-vs-all and restricted training cost");
  bench->add_option("--corpus", corpus, "Tagged corpus");
  bench->add_flag("--synthetic", synthetic, "Use a generated 50-tag ambiguity corpus");
  bench->add_option("--sentences", sentences, "Sentences for --synthetic");
  bench->add_option("--config", config, "key=value configuration file");
  bench->add_option("--runs", runs, "Timed runs per mode (median reported)")->check(CLI::PositiveNumber);
  bench->add_option("--threads", bench_threads, "Accepted for symmetry; training is sequential")
      ->check(CLI::Range(1U, 1U));
  bench->add_flag("--records", records, "key=value output");
  bench_o.add(bench);

  auto* verify = app.add_subcommand("verify", "Run the theory checks");
  verify->add_option("--seed", seed, "Seed for the randomized checks");

  auto* convert = app.add_subcommand("convert-dt", "Convert a decision tree into a sequential model");
  convert->add_option("--tree", tree, "Tree file")->required();
  convert->add_option("--out", out, "SMV1 output path")->required();

  auto* gen = app.add_subcommand("gen-corpus", "Write a synthetic tagged corpus");
  gen->add_option("--kind", kind, "english or ambiguity")->check(CLI::IsMember({"english", "ambiguity"}));
  gen->add_option("--sentences", sentences, "Number of sentences");
  gen->add_option("--seed", seed, "Generator seed");
  gen->add_option("--out", out, "Output path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  try {
    if (*train) return cmd_train(corpus, config, out, train_o);
    if (*tag) return cmd_tag(model, input, output, trace, threads);
    if (*eval) return cmd_eval(model, test, corpus, config, compare, records, threads, eval_o);
    if (*bench) return cmd_bench(corpus, config, synthetic, sentences, runs, records, bench_o);
    if (*verify) return cmd_verify(seed);
    if (*convert) return cmd_convert_dt(tree, out);
    if (*gen) return cmd_gen_corpus(kind, sentences, seed, out);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "seqm: " << e.what() << '\n';
    return kUsage;
  } catch (const VerificationFailure& e) {
    std::cerr << "seqm: " << e.what() << '\n';
    return kVerification;
  } catch (const std::exception& e) {
    std::cerr << "seqm: " << e.what() << '\n';
    return kData;
  }
  return kUsage;
}
