#include <gtest/gtest.h>

#include <sstream>

#include "helpers.hpp"
#include "seqmodel/serialization.hpp"
#include "seqmodel/tagger.hpp"

using namespace seqm;
using testing_util::corpus;
using testing_util::words;

namespace {

TaggedCorpus toy() {
  return corpus({
      "the/DT dog/NN runs/VBZ ./.",
      "John/NNP is/VBZ running/VBG home/NN ./.",
      "Reading/VBG is/VBZ fun/NN ./.",
      "Boeing/NNP builds/VBZ planes/NNS ./.",
      "the/DT children/NNS were/VBD singing/VBG ./.",
      "Paris/NNP is/VBZ big/JJ ./.",
      "a/DT run/NN is/VBZ fun/NN ./.",
      "they/PRP run/VBP home/NN ./.",
  });
}

TaggerConfig config(TrainingMode mode) {
  TaggerConfig c;
  c.mode = mode;
  c.folds = 2;
  return c;
}

std::vector<std::string> tag_names(const TrainedTagger& t, const Sentence& s) {
  std::vector<std::string> out;
  for (const auto& tok : t.tag_sentence(s)) out.push_back(t.alphabet.name(tok.tag));
  return out;
}

}  // namespace

TEST(Tagger, TrainingNeverPresentsAnExampleWithoutItsGoldTag) {
  auto t = train_tagger(corpus({"The/DT dog/NN runs/VBZ ./.", "Running/VBG dogs/NNS bark/VBP ./."}),
                        config(TrainingMode::sm_restricted));
  // Every example handed to a network contains its gold label; the others
  // were counted as filtered before training.
  EXPECT_EQ(t.report.winnow.filtered, 0U);
  EXPECT_EQ(t.report.winnow_unknown.filtered, 0U);
  EXPECT_LE(t.report.winnow_unknown.examples + t.report.filtered, t.report.tokens);
}

TEST(Tagger, ModesShareLexiconAndFilters) {
  auto sm = train_tagger(toy(), config(TrainingMode::sm_restricted));
  auto ova = train_tagger(toy(), config(TrainingMode::one_vs_all));
  EXPECT_EQ(sm.lexicon, ova.lexicon);
  EXPECT_TRUE(sm.f1->equals(*ova.f1));
  EXPECT_TRUE(sm.f2->equals(*ova.f2));
  EXPECT_LE(sm.report.winnow.presentations, ova.report.winnow.presentations);
  EXPECT_LE(sm.report.winnow.total_updates, ova.report.winnow.total_updates);
}

TEST(Tagger, OneWordCorpusEmitsThatTag) {
  auto t = train_tagger(corpus({"yes/UH", "yes/UH yes/UH"}), config(TrainingMode::sm_restricted));
  EXPECT_EQ(tag_names(t, words("yes yes yes")), (std::vector<std::string>{"UH", "UH", "UH"}));
  EXPECT_EQ(tag_names(t, words("something")), std::vector<std::string>{"UH"});
}

TEST(Tagger, SingleTagKnownWordsBypassTheCascade) {
  auto t = train_tagger(toy(), config(TrainingMode::sm_restricted));
  auto out = t.tag_sentence(words("the dog runs ."));
  std::vector<std::string> tags;
  for (const auto& tok : out) {
    EXPECT_EQ(tok.route, Route::lexicon);
    EXPECT_FALSE(tok.trace);
    tags.push_back(t.alphabet.name(tok.tag));
  }
  EXPECT_EQ(tags, (std::vector<std::string>{"DT", "NN", "VBZ", "."}));
}

TEST(Tagger, KnownWordTagComesFromItsLexiconSet) {
  for (auto mode : {TrainingMode::sm_restricted, TrainingMode::one_vs_all}) {
    auto t = train_tagger(toy(), config(mode));
    auto out = t.tag_sentence(words("they run home ."));
    auto tag = t.alphabet.name(out[1].tag);
    EXPECT_TRUE(tag == "NN" || tag == "VBP") << tag;
  }
}

TEST(Tagger, CapitalizedIngWordIsFilteredToItsCandidates) {
  auto t = train_tagger(toy(), config(TrainingMode::sm_restricted));
  auto out = t.tag_sentence(words("Jumping is fun ."));
  ASSERT_EQ(out[0].route, Route::sequential);
  const auto& trace = *out[0].trace;
  ASSERT_EQ(trace.stages.size(), 3U);
  ConfusionSet expected({t.alphabet.id("NNP"), t.alphabet.id("VBG")});
  EXPECT_EQ(trace.stages[0].output, expected);  // cap: only NNP and VBG
  EXPECT_EQ(trace.stages[1].output, expected);  // suffixes: both seen with -ing
  EXPECT_TRUE(expected.contains(trace.label));
}

TEST(Tagger, FeaturelessUnknownWordKeepsTheFullAlphabet) {
  auto t = train_tagger(toy(), config(TrainingMode::sm_restricted));
  auto out = t.tag_sentence(words("go"));
  ASSERT_TRUE(out[0].trace);
  const auto& stages = out[0].trace->stages;
  EXPECT_EQ(stages.back().input, ConfusionSet::full(t.alphabet.size()));
  for (const auto& st : stages) EXPECT_EQ(st.output.size(), t.alphabet.size());
}

TEST(Tagger, UnseenNumberIsCardinal) {
  auto t = train_tagger(corpus({"I/PRP saw/VBD 3/CD dogs/NNS"}), config(TrainingMode::sm_restricted));
  auto out = t.tag_sentence(words("I saw 1,250 dogs"));
  EXPECT_EQ(out[2].route, Route::numeric);
  EXPECT_EQ(t.alphabet.name(out[2].tag), "CD");
}

TEST(Tagger, ConfigurationErrorsAreRejectedBeforeTraining) {
  TaggerConfig c;
  c.stage_order = {"f1", "f4", "f3"};
  EXPECT_THROW(train_tagger(toy(), c), InvalidInput);
  c = {};
  c.epsilon["f2"] = 1.0;
  EXPECT_THROW(train_tagger(toy(), c), InvalidInput);
}

TEST(TaggerSerialization, RoundTripRetagsIdentically) {
  for (auto mode : {TrainingMode::sm_restricted, TrainingMode::one_vs_all}) {
    auto t = train_tagger(toy(), config(mode));
    std::stringstream buf;
    save_tagger(buf, t);
    auto loaded = load_tagger(buf);
    auto held_out = words("Jumping dogs were running to Paris with 12 children");
    auto a = t.tag_sentence(held_out), b = loaded.tag_sentence(held_out);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].tag, b[i].tag);
    EXPECT_TRUE(models_equal(t.unknown_model, loaded.unknown_model));

    std::stringstream again;
    save_tagger(again, loaded);
    std::stringstream first;
    save_tagger(first, t);
    EXPECT_EQ(first.str(), again.str());
  }
}

TEST(TaggerSerialization, TruncatedFileNamesALine) {
  auto t = train_tagger(toy(), config(TrainingMode::sm_restricted));
  std::stringstream buf;
  save_tagger(buf, t);
  std::string text = buf.str();
  std::istringstream cut(text.substr(0, text.size() / 2));
  try {
    load_tagger(cut, "model.smv1");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_GT(e.line(), 0U);
    EXPECT_NE(std::string(e.what()).find("model.smv1:"), std::string::npos);
  }
}

TEST(TaggerSerialization, WrongHeaderIsAVersionError) {
  std::istringstream in("SMV2\nalphabet 2 A B\n");
  EXPECT_THROW(load_tagger(in), VersionError);
}
