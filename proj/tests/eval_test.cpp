#include <gtest/gtest.h>

#include "helpers.hpp"
#include "seqmodel/eval.hpp"
#include "seqmodel/synthetic.hpp"

using namespace seqm;
using testing_util::corpus;

namespace {

TaggedCorpus small_english(std::size_t sentences, std::uint64_t seed) {
  synth::EnglishLikeOptions o;
  o.sentences = sentences;
  o.seed = seed;
  o.nouns = 300;
  o.verbs = 120;
  o.adjectives = 120;
  o.proper = 150;
  return synth::english_like_corpus(o);
}

}  // namespace

TEST(Split, IsDeterministicAndDisjoint) {
  auto c = small_english(200, 1);
  auto [train, test] = split_corpus(c, 0.1, 7);
  auto [train2, test2] = split_corpus(c, 0.1, 7);
  EXPECT_EQ(test.sentences.size(), 20U);
  EXPECT_EQ(train.sentences.size() + test.sentences.size(), c.sentences.size());
  ASSERT_EQ(test.sentences.size(), test2.sentences.size());
  for (std::size_t i = 0; i < test.sentences.size(); ++i)
    EXPECT_EQ(test.sentences[i].tokens[0].surface, test2.sentences[i].tokens[0].surface);
}

TEST(Evaluate, MemorizedSingleTagWordsAreAllCorrect) {
  auto c = corpus({"the/DT dog/NN barks/VBZ", "a/DT cat/NN sleeps/VBZ"});
  auto t = train_tagger(c, TaggerConfig{});
  auto r = evaluate(t, c);
  EXPECT_EQ(r.accuracy(TokenClass::known), 1.0);
}

TEST(Evaluate, NoUnknownWordsMeansUndefinedAccuracy) {
  auto c = corpus({"the/DT dog/NN barks/VBZ"});
  auto r = evaluate(train_tagger(c, TaggerConfig{}), c);
  EXPECT_FALSE(r.accuracy(TokenClass::unknown).has_value());
  EXPECT_FALSE(r.accuracy(TokenClass::numeric).has_value());
  EXPECT_EQ(detail::percent(r.accuracy(TokenClass::unknown)), "n/a");
}

TEST(Evaluate, StreamingCountsMatchTheConfusionMatrix) {
  auto c = small_english(400, 2);
  auto [train, test] = split_corpus(c, 0.2, 3);
  auto t = train_tagger(train, TaggerConfig{});
  auto r = evaluate(t, test, 2);
  EXPECT_TRUE(r.consistent());
  for (auto cls : {TokenClass::known, TokenClass::unknown, TokenClass::numeric})
    EXPECT_EQ(r.accuracy(cls), r.matrix_accuracy(cls));
}

TEST(Evaluate, SurvivalNeverIncreasesAlongThePipeline) {
  auto c = small_english(400, 4);
  auto [train, test] = split_corpus(c, 0.2, 5);
  auto r = evaluate(train_tagger(train, TaggerConfig{}), test);
  ASSERT_FALSE(r.stages.empty());
  for (std::size_t i = 1; i < r.stages.size(); ++i) {
    EXPECT_LE(r.stages[i].gold_survived, r.stages[i - 1].gold_survived);
    EXPECT_LE(r.stages[i].set_size_sum, r.stages[i - 1].set_size_sum);
  }
}

TEST(Evaluate, ThreadCountDoesNotChangeResults) {
  auto c = small_english(300, 6);
  auto [train, test] = split_corpus(c, 0.3, 1);
  auto t = train_tagger(train, TaggerConfig{});
  auto one = evaluate(t, test, 1), many = evaluate(t, test, 5);
  EXPECT_EQ(one.count, many.count);
  EXPECT_EQ(one.correct, many.correct);
  for (std::size_t i = 0; i < one.stages.size(); ++i)
    EXPECT_EQ(one.stages[i].gold_survived, many.stages[i].gold_survived);
}

TEST(Evaluate, TrainingIsReproducible) {
  auto c = small_english(200, 9);
  auto a = train_tagger(c, TaggerConfig{}), b = train_tagger(c, TaggerConfig{});
  EXPECT_TRUE(models_equal(a.unknown_model, b.unknown_model));
  EXPECT_TRUE(a.f3_known->equals(*b.f3_known));
}

TEST(Compare, FourConfigurationRows) {
  auto c = small_english(300, 8);
  auto [train, test] = split_corpus(c, 0.2, 2);
  auto rows = compare_configurations(train, test, TaggerConfig{});
  ASSERT_EQ(rows.size(), 4U);
  EXPECT_EQ(rows[0].name, "f3");
  EXPECT_EQ(rows[3].name, "SM(f1,f2,f3')");
  for (const auto& r : rows) EXPECT_EQ(r.report.tokens(TokenClass::unknown), rows[0].report.tokens(TokenClass::unknown));
}

TEST(Bench, TwoTagsWithFullSetsCostTheSame) {
  // Every word is ambiguous between both tags, so both modes present each
  // example to both nodes.
  TaggedCorpus c;
  for (int i = 0; i < 60; ++i)
    c.sentences.push_back(corpus({"x/A y/B x/B y/A"}).sentences[0]);
  TaggerConfig cfg;
  cfg.unknown_max_freq = 0;
  auto r = bench_training(c, cfg, 1);
  EXPECT_DOUBLE_EQ(r.update_ratio(), 1.0);
}

TEST(Bench, AmbiguityCorpusRestrictsTraining) {
  synth::AmbiguityOptions o;
  o.sentences = 300;
  auto c = synth::ambiguity_corpus(o);
  TaggerConfig cfg;
  cfg.unknown_max_freq = 0;
  cfg.classifier = ContextClassifier::f3;
  auto r = bench_training(c, cfg, 1);
  EXPECT_EQ(r.ova.mean_confusion_set, 50.0);
  EXPECT_LE(r.sm.mean_confusion_set, 5.0);
  EXPECT_LT(r.update_ratio(), 0.25);
  EXPECT_LT(r.mistake_ratio(), 1.0);
}

TEST(Bench, ToyCorpusTrainsFasterRestricted) {
  auto c = small_english(1500, 3);
  TaggerConfig cfg;
  cfg.unknown_max_freq = 0;
  auto r = bench_training(c, cfg, 3);
  EXPECT_LT(r.sm.snow_seconds, r.ova.snow_seconds);
}
