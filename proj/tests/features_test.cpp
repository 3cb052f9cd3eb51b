#include <gtest/gtest.h>

#include <algorithm>
#include <sstream>

#include "helpers.hpp"
#include "seqmodel/features.hpp"

using namespace seqm;
using testing_util::corpus;
using testing_util::words;

namespace {

bool has(const std::vector<std::string>& v, const std::string& s) { return std::find(v.begin(), v.end(), s) != v.end(); }

}  // namespace

TEST(ReadCorpus, ParsesSentencesAndComments) {
  std::istringstream in("# header\nThe\tDT\ndog\tNN\n\n\nIt\tPRP\n");
  auto c = read_corpus(in);
  ASSERT_EQ(c.sentences.size(), 2U);
  EXPECT_EQ(c.sentences[0].tokens[1].surface, "dog");
  EXPECT_EQ(*c.sentences[1].tokens[0].tag, "PRP");
}

TEST(ReadCorpus, MalformedLineIsNamed) {
  std::ostringstream text;
  for (int i = 1; i < 17; ++i) text << "w" << i << "\tNN\n";
  text << "no-tab-here\n";
  std::istringstream in(text.str());
  try {
    read_corpus(in, "toy.tsv");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 17U);
    EXPECT_NE(std::string(e.what()).find("toy.tsv:17"), std::string::npos);
  }
}

TEST(ReadCorpus, UntaggedInputAllowedForTagging) {
  std::istringstream in("Hello\nworld\n");
  auto c = read_corpus(in, "<in>", false);
  ASSERT_EQ(c.sentences.size(), 1U);
  EXPECT_FALSE(c.sentences[0].tokens[0].tag);
}

TEST(ReadCorpus, RoundTripsThroughWriter) {
  auto c = corpus({"The/DT dog/NN", "Mary/NNP runs/VBZ ./."});
  std::ostringstream out;
  write_corpus(out, c);
  std::istringstream in(out.str());
  auto back = read_corpus(in);
  std::ostringstream again;
  write_corpus(again, back);
  EXPECT_EQ(out.str(), again.str());
}

TEST(Lexical, AllGuardsPass) {
  auto f = extract_lexical("Running");
  EXPECT_EQ(f, (std::vector<std::string>{"cap", "suf1:g", "suf2:ng", "suf3:ing"}));
}

TEST(Lexical, ShortWordHasNoFeatures) { EXPECT_TRUE(extract_lexical("go").empty()); }

TEST(Lexical, FourLettersGetOneSuffix) { EXPECT_EQ(extract_lexical("cats"), std::vector<std::string>{"suf1:s"}); }

TEST(Lexical, CountsCodePointsAndLowercasesSuffixes) {
  // Five code points, seven bytes: suf1 and suf2 only.
  EXPECT_EQ(extract_lexical("CAFÉS"), (std::vector<std::string>{"cap", "suf1:s", "suf2:és"}));
}

TEST(Contextual, SingleTokenSentenceSeesOnlyBoundaries) {
  Lexicon lex = build_lexicon(corpus({"Hi/UH"}));
  auto s = words("Hi");
  auto f = extract_contextual(s, 0, {}, lex, false);
  EXPECT_TRUE(has(f, "t-1:<S>"));
  EXPECT_TRUE(has(f, "t-2:<S>"));
  EXPECT_TRUE(has(f, "t+1:</S>"));
  EXPECT_TRUE(has(f, "t+2:</S>"));
  EXPECT_TRUE(has(f, "t-1&t+1:<S>&</S>"));
  EXPECT_TRUE(has(f, "w:Hi"));
  EXPECT_EQ(f.size(), 8U);
  EXPECT_EQ(extract_contextual(s, 0, {}, lex, true).size(), 9U);
}

TEST(Contextual, UsesAssignedLeftTagsAndBaselineRightTags) {
  Lexicon lex = build_lexicon(corpus({"the/DT old/JJ man/NN ran/VBD home/NN"}));
  auto s = words("the old man ran home");
  auto f = extract_contextual(s, 2, {"DT", "NN"}, lex, false);
  EXPECT_TRUE(has(f, "t-1:NN"));
  EXPECT_TRUE(has(f, "t-2:DT"));
  EXPECT_TRUE(has(f, "t-2&t-1:DT&NN"));
  EXPECT_TRUE(has(f, "t+1:VBD"));
  EXPECT_TRUE(has(f, "t+1&t+2:VBD&NN"));
}

TEST(Contextual, BaselineFeatureOfUnknownCapitalizedWord) {
  Lexicon lex = build_lexicon(corpus({"the/DT"}));
  auto f = extract_contextual(words("the Xerox"), 1, {"DT"}, lex, true);
  EXPECT_TRUE(has(f, "base:NNP"));
}

TEST(Baseline, UnknownAndKnownWords) {
  Lexicon lex;
  lex.add("the", "DT", 100);
  lex.finalize();
  EXPECT_EQ(baseline_tag("Xerox", lex), "NNP");
  EXPECT_EQ(baseline_tag("blork", lex), "NN");
  EXPECT_EQ(baseline_tag("the", lex), "DT");
}

TEST(LexiconTest, CollectsTagSets) {
  auto lex = build_lexicon(corpus({"run/VB run/NN"}));
  const auto* e = lex.find("run");
  ASSERT_NE(e, nullptr);
  EXPECT_EQ(e->tag_counts.size(), 2U);
  EXPECT_TRUE(e->tag_counts.count("VB") && e->tag_counts.count("NN"));
}

TEST(LexiconTest, SingleEntry) {
  auto lex = build_lexicon(corpus({"hello/UH"}));
  EXPECT_EQ(lex.size(), 1U);
  EXPECT_EQ(lex.find("hello")->tag_counts.size(), 1U);
}

TEST(LexiconTest, TieBreaksLexicographically) {
  auto lex = build_lexicon(corpus({"run/VB run/NN run/VB run/NN"}));
  EXPECT_EQ(lex.find("run")->most_frequent, "NN");
}

TEST(Unknown, NumericAndKnownWordsAreNotUnknown) {
  auto lex = build_lexicon(corpus({"the/DT"}));
  NumericPattern num;
  EXPECT_TRUE(is_unknown("blork", lex, num));
  EXPECT_FALSE(is_unknown("3.14", lex, num));
  EXPECT_FALSE(is_unknown("1,000", lex, num));
  EXPECT_FALSE(is_unknown("the", lex, num));
}
