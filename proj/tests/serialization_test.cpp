#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "helpers.hpp"
#include "seqmodel/decision_tree.hpp"
#include "seqmodel/serialization.hpp"
#include "seqmodel/theory.hpp"

using namespace seqm;

TEST(ModelFile, TableModelsRoundTripByteForByte) {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 50; ++i) {
    auto m = theory::random_table_model(rng);
    std::string text = serialize_model(m);
    auto back = parse_model(text);
    EXPECT_TRUE(models_equal(m, back));
    EXPECT_EQ(serialize_model(back), text);
  }
}

TEST(ModelFile, PredictionsSurviveRoundTrip) {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 50; ++i) {
    auto m = theory::random_table_model(rng);
    auto back = parse_model(serialize_model(m));
    for (int k = 0; k < 20; ++k) {
      auto x = theory::random_input(rng);
      auto a = sm_predict(m, x), b = sm_predict(back, x);
      EXPECT_EQ(a.label, b.label);
      EXPECT_EQ(a.final_distribution, b.final_distribution);
    }
  }
}

TEST(ModelFile, TruncationIsAParseError) {
  std::mt19937_64 rng(2);
  std::string text = serialize_model(theory::random_table_model(rng));
  for (std::size_t cut : {text.size() / 3, text.size() - 5}) {
    std::istringstream in(text.substr(0, cut));
    EXPECT_THROW(read_model(in, "m"), ParseError);
  }
}

TEST(ModelFile, WrongMagicIsAVersionError) {
  std::istringstream in("SMV9\n");
  EXPECT_THROW(read_model(in), VersionError);
}

TEST(DecisionTree, DepthOneBecomesOneStage) {
  std::istringstream in("node 0 query=0 left=leaf:A right=leaf:B\n");
  auto tree = read_tree(in);
  auto sm = dt_to_sm(tree);
  ASSERT_EQ(sm.stages.size(), 1U);
  auto a = sm_predict(sm, bits_example({false}, *sm.features));
  auto b = sm_predict(sm, bits_example({true}, *sm.features));
  EXPECT_EQ(sm.alphabet.name(a.label), "A");
  EXPECT_EQ(sm.alphabet.name(b.label), "B");
}

TEST(DecisionTree, CompleteDepthThreeAgreesOnAllInputs) {
  std::istringstream in(
      "node 0 query=0 left=1 right=2\n"
      "node 1 query=1 left=3 right=4\n"
      "node 2 query=1 left=5 right=6\n"
      "node 3 query=2 left=leaf:A right=leaf:B\n"
      "node 4 query=2 left=leaf:C right=leaf:D\n"
      "node 5 query=2 left=leaf:B right=leaf:A\n"
      "node 6 query=2 left=leaf:D right=leaf:C\n");
  auto tree = read_tree(in);
  auto sm = dt_to_sm(tree);
  EXPECT_EQ(sm.stages.size(), 7U);
  // Hand-written oracle of the same tree.
  const char* expected[8];
  for (int v = 0; v < 8; ++v) {
    bool b0 = v & 1, b1 = v & 2, b2 = v & 4;
    const char* table[2][2][2] = {{{"A", "B"}, {"C", "D"}}, {{"B", "A"}, {"D", "C"}}};
    expected[v] = table[b0][b1][b2];
  }
  for (int v = 0; v < 8; ++v) {
    std::vector<bool> x{bool(v & 1), bool(v & 2), bool(v & 4)};
    EXPECT_EQ(sm.alphabet.name(sm_predict(sm, bits_example(x, *sm.features)).label), expected[v]) << v;
  }
  auto back = parse_model(serialize_model(sm));
  EXPECT_EQ(theory::dt_equivalence_check(tree, back, 3).mismatches, 0U);
}

TEST(DecisionTree, RejectsMalformedTrees) {
  std::istringstream missing("node 0 query=0 left=1 right=leaf:A\n");
  EXPECT_THROW(read_tree(missing), Error);
  std::istringstream garbage("node 0 query=x left=leaf:A right=leaf:B\n");
  EXPECT_THROW(read_tree(garbage), ParseError);
}

TEST(DecisionTree, TreeFileRoundTrips) {
  std::mt19937_64 rng(4);
  auto tree = random_tree(rng, 9, 6, {"A", "B", "C", "D"});
  std::ostringstream out;
  write_tree(out, tree);
  std::istringstream in(out.str());
  auto back = read_tree(in);
  std::ostringstream again;
  write_tree(again, back);
  EXPECT_EQ(out.str(), again.str());
}
