// Randomized invariants with hand-rolled generators. Seeds are fixed so
// failures reproduce.
#include <gtest/gtest.h>

#include <random>

#include "helpers.hpp"
#include "seqmodel/core.hpp"
#include "seqmodel/decision_tree.hpp"
#include "seqmodel/features.hpp"
#include "seqmodel/theory.hpp"

using namespace seqm;

namespace {

LabelDistribution random_distribution(std::mt19937_64& rng, std::size_t m, const ConfusionSet& cs) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> w(m, 0.0);
  for (LabelId c : cs) w[c] = u(rng) < 0.2 ? 0.0 : u(rng);
  double total = 0.0;
  for (double x : w) total += x;
  if (total == 0.0) w[*cs.begin()] = 1.0;
  return LabelDistribution::from_weights(w);
}

ConfusionSet random_subset(std::mt19937_64& rng, std::size_t m) {
  std::vector<LabelId> ids;
  for (std::size_t c = 0; c < m; ++c)
    if (rng() % 2) ids.push_back(static_cast<LabelId>(c));
  if (ids.empty()) ids.push_back(static_cast<LabelId>(rng() % m));
  return ConfusionSet(ids);
}

std::string random_word(std::mt19937_64& rng) {
  static const std::vector<std::string> pieces{"a", "b", "Q", "z", "É", "é", "ß", "n", "g", "i", "-", "7"};
  std::string w;
  std::size_t n = 1 + rng() % 9;
  for (std::size_t i = 0; i < n; ++i) w += pieces[rng() % pieces.size()];
  return w;
}

}  // namespace

TEST(Property, FilterIsNonEmptySubsetOfIncomingSet) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> eps(0.0, 1.0);
  for (int i = 0; i < 5000; ++i) {
    std::size_t m = 2 + rng() % 10;
    auto prev = random_subset(rng, m);
    auto d = random_distribution(rng, m, prev);
    double e = eps(rng);
    auto next = stage_filter(d, e, prev);
    ASSERT_TRUE(next.subset_of(prev));
    if (next.size() > 1) {
      for (LabelId c : next) ASSERT_GT(d[c], e);
    }
  }
}

TEST(Property, FilterIsMonotoneInThreshold) {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 3000; ++i) {
    std::size_t m = 2 + rng() % 8;
    auto cs = ConfusionSet::full(m);
    auto d = random_distribution(rng, m, cs);
    double lo = std::uniform_real_distribution<double>(0, 0.5)(rng);
    double hi = lo + std::uniform_real_distribution<double>(0, 0.5)(rng);
    auto a = stage_filter(d, lo, cs), b = stage_filter(d, hi, cs);
    ASSERT_TRUE(b.subset_of(a));
  }
}

TEST(Property, CombineIsNormalizedAndSupportedOnSurvivors) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 3000; ++i) {
    std::size_t m = 2 + rng() % 8;
    auto prev = ConfusionSet::full(m);
    auto running = random_distribution(rng, m, prev);
    auto next = random_distribution(rng, m, prev);
    auto surv = random_subset(rng, m);
    try {
      auto out = combine_distributions(running, next, surv);
      ASSERT_TRUE(out.normalized());
      for (std::size_t c = 0; c < m; ++c) {
        if (!surv.contains(static_cast<LabelId>(c))) {
          ASSERT_EQ(out[static_cast<LabelId>(c)], 0.0);
        }
      }
      // Oracle: direct multiplication.
      double z = 0.0;
      for (LabelId c : surv) z += running[c] * next[c];
      for (LabelId c : surv) ASSERT_NEAR(out[c], running[c] * next[c] / z, 1e-9);
    } catch (const DegenerateProduct&) {
      for (LabelId c : surv) ASSERT_EQ(running[c] * next[c], 0.0);
    }
  }
}

TEST(Property, PipelineSetsShrinkAndStayNonEmpty) {
  auto r = theory::monotonicity_fuzz(77, 10000);
  EXPECT_EQ(r.cases, 10000U);
  EXPECT_EQ(r.subset_violations, 0U);
  EXPECT_EQ(r.empty_sets, 0U);
  EXPECT_EQ(r.zero_mass_violations, 0U);
  EXPECT_EQ(r.normalization_violations, 0U);
  EXPECT_EQ(r.degenerate, 0U);
}

TEST(Property, RandomTreesConvertExactly) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 60; ++i) {
    std::uint32_t bits = 1 + rng() % 8;
    std::vector<std::string> labels{"A", "B", "C", "D", "E"};
    labels.resize(1 + rng() % 5);
    auto tree = random_tree(rng, 1 + rng() % 15, bits, labels);
    auto rep = theory::dt_equivalence_check(tree, dt_to_sm(tree), bits);
    ASSERT_TRUE(rep.exact()) << "tree " << i;
  }
}

TEST(Property, LexicalFeaturesRespectLengthGuards) {
  std::mt19937_64 rng(6);
  for (int i = 0; i < 3000; ++i) {
    auto w = random_word(rng);
    auto n = utf8::code_points(w).size();
    auto f = extract_lexical(w);
    std::size_t suffixes = 0;
    for (const auto& s : f)
      if (s.rfind("suf", 0) == 0) ++suffixes;
    std::size_t expected = n > 5 ? 3 : n > 4 ? 2 : n > 3 ? 1 : 0;
    ASSERT_EQ(suffixes, expected) << w;
  }
}

TEST(Property, CorpusWriterRoundTrips) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 200; ++i) {
    TaggedCorpus c;
    std::size_t n = 1 + rng() % 5;
    for (std::size_t s = 0; s < n; ++s) {
      Sentence sent;
      std::size_t len = 1 + rng() % 6;
      for (std::size_t k = 0; k < len; ++k) sent.tokens.push_back({random_word(rng), "T" + std::to_string(rng() % 4)});
      c.sentences.push_back(sent);
    }
    std::ostringstream out;
    write_corpus(out, c);
    std::istringstream in(out.str());
    auto back = read_corpus(in);
    ASSERT_EQ(back.sentences.size(), c.sentences.size());
    for (std::size_t s = 0; s < n; ++s)
      for (std::size_t k = 0; k < c.sentences[s].size(); ++k) {
        ASSERT_EQ(back.sentences[s].tokens[k].surface, c.sentences[s].tokens[k].surface);
        ASSERT_EQ(back.sentences[s].tokens[k].tag, c.sentences[s].tokens[k].tag);
      }
  }
}
