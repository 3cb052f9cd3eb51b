#include <gtest/gtest.h>

#include "helpers.hpp"
#include "seqmodel/core.hpp"

using namespace seqm;
using testing_util::dist;
using testing_util::fixed_stage;
using testing_util::set;

namespace {
constexpr LabelId A = 0, B = 1, C = 2;
}

TEST(StageFilter, KeepsLabelsAboveThreshold) {
  EXPECT_EQ(stage_filter(dist({0.5, 0.3, 0.2}), 0.25, set({A, B, C})), set({A, B}));
}

TEST(StageFilter, FallsBackToArgmaxWhenNothingSurvives) {
  EXPECT_EQ(stage_filter(dist({0.5, 0.3, 0.2}), 0.6, set({A, B, C})), set({A}));
}

TEST(StageFilter, SingletonIdentity) { EXPECT_EQ(stage_filter(dist({1.0}), 0.0, set({A})), set({A})); }

TEST(StageFilter, FallbackStaysInsideIncomingSet) {
  // The global argmax A is not a candidate; the fallback must come from {B, C}.
  EXPECT_EQ(stage_filter(dist({0.7, 0.1, 0.2}), 0.5, set({B, C})), set({C}));
}

TEST(StageFilter, ThresholdIsStrict) {
  EXPECT_EQ(stage_filter(dist({0.5, 0.5}), 0.5, set({A, B})), set({A}));
}

TEST(Combine, UniformRunningIsIdentity) {
  auto out = combine_distributions(dist({0.5, 0.5}), dist({0.8, 0.2}), set({A, B}));
  EXPECT_NEAR(out[A], 0.8, 1e-12);
  EXPECT_NEAR(out[B], 0.2, 1e-12);
}

TEST(Combine, RestrictsAndRenormalizes) {
  auto out = combine_distributions(dist({0.5, 0.5}), dist({0.5, 0.5}), set({A}));
  EXPECT_DOUBLE_EQ(out[A], 1.0);
  EXPECT_DOUBLE_EQ(out[B], 0.0);
}

TEST(Combine, MultipliesPointwise) {
  auto out = combine_distributions(dist({0.6, 0.4}), dist({0.5, 0.5}), set({A, B}));
  EXPECT_NEAR(out[A], 0.30 / 0.50, 1e-12);
  EXPECT_NEAR(out[B], 0.20 / 0.50, 1e-12);
}

TEST(Combine, ZeroProductOnEverySurvivorIsDegenerate) {
  EXPECT_THROW(combine_distributions(dist({1.0, 0.0}), dist({0.0, 1.0}), set({A, B})), DegenerateProduct);
}

TEST(Combine, TinyProbabilitiesDoNotUnderflow) {
  // Direct products would be 1e-360 and 1e-380, both below the double range.
  auto out = combine_distributions(dist({1e-200, 1e-210, 1.0}), dist({1e-160, 1e-170, 1.0}), set({A, B}));
  EXPECT_TRUE(out.normalized());
  EXPECT_NEAR(out[A], 1.0, 1e-12);
  EXPECT_GT(out[B], 0.0);
}

TEST(SmPredict, OneStage) {
  SequentialModel m;
  m.alphabet = LabelAlphabet({"A", "B"});
  m.stages.push_back(fixed_stage("s", {0.9, 0.1}, 0.5));
  auto t = sm_predict(m, {});
  EXPECT_EQ(t.label, A);
  ASSERT_EQ(t.stages.size(), 1U);
  EXPECT_EQ(t.stages[0].input, set({A, B}));
  EXPECT_EQ(t.stages[0].output, set({A}));
}

TEST(SmPredict, TwoStageComposition) {
  SequentialModel m;
  m.alphabet = LabelAlphabet({"A", "B", "C"});
  m.stages.push_back(fixed_stage("s1", {0.45, 0.45, 0.1}, 0.2));
  m.stages.push_back(fixed_stage("s2", {0.3, 0.7, 0.0}, 0.0));
  auto t = sm_predict(m, {});
  EXPECT_EQ(t.stages[0].output, set({A, B}));
  EXPECT_EQ(t.label, B);
  EXPECT_NEAR(t.final_distribution[B], 0.7, 1e-12);
}

TEST(SmPredict, ReplaceModeUsesLastStageOnly) {
  SequentialModel m;
  m.alphabet = LabelAlphabet({"A", "B"});
  m.combine = CombineMode::replace;
  m.stages.push_back(fixed_stage("s1", {0.9, 0.1}, 0.0));
  m.stages.push_back(fixed_stage("s2", {0.4, 0.6}, 0.0));
  auto t = sm_predict(m, {});
  EXPECT_EQ(t.label, B);
  EXPECT_NEAR(t.final_distribution[B], 0.6, 1e-12);

  m.combine = CombineMode::product;  // 0.36 vs 0.06
  EXPECT_EQ(sm_predict(m, {}).label, A);
}

TEST(SmPredict, MassOutsideIncomingSetIsAStageFailure) {
  class Leaky final : public StageClassifier {
   public:
    std::string_view kind() const override { return "leaky"; }
    LabelDistribution predict(const SparseExample&, const ConfusionSet&) const override { return dist({0.5, 0.5}); }
    void write_payload(std::ostream&, const FeatureSpace&, const LabelAlphabet&) const override {}
    bool equals(const StageClassifier&) const override { return false; }
  };
  SequentialModel m;
  m.alphabet = LabelAlphabet({"A", "B"});
  m.stages.push_back(fixed_stage("s1", {1.0, 0.0}, 0.0));
  m.stages.push_back(Stage{"s2", std::make_shared<Leaky>(), 0.0, "all"});
  try {
    sm_predict(m, {});
    FAIL() << "expected StageFailure";
  } catch (const StageFailure& e) {
    EXPECT_EQ(e.stage(), 1U);
  }
}

TEST(SmValidate, WellFormedModelHasNoDiagnostics) {
  SequentialModel m;
  m.alphabet = LabelAlphabet({"A", "B"});
  for (const char* n : {"a", "b", "c"}) m.stages.push_back(fixed_stage(n, {0.5, 0.5}, 0.1));
  EXPECT_TRUE(sm_validate(m).empty());
}

TEST(SmValidate, ThresholdOfOneIsReported) {
  SequentialModel m;
  m.alphabet = LabelAlphabet({"A", "B"});
  m.stages.push_back(fixed_stage("ok", {0.5, 0.5}, 0.1));
  m.stages.push_back(fixed_stage("bad", {0.5, 0.5}, 1.0));
  auto d = sm_validate(m);
  ASSERT_EQ(d.size(), 1U);
  EXPECT_NE(d[0].find("bad"), std::string::npos);
}

TEST(SmValidate, UnknownViewIsReported) {
  SequentialModel m;
  m.alphabet = LabelAlphabet({"A", "B"});
  auto s = fixed_stage("s", {0.5, 0.5}, 0.0);
  s.view = "nowhere";
  m.stages.push_back(s);
  EXPECT_EQ(sm_validate(m).size(), 1U);
}

TEST(ConfusionSet, RejectsEmpty) { EXPECT_THROW(ConfusionSet({}), InvalidInput); }

TEST(LabelAlphabet, RejectsDuplicatesAndTinyAlphabets) {
  EXPECT_THROW(LabelAlphabet({"A"}), InvalidInput);
  EXPECT_THROW(LabelAlphabet({"A", "A"}), InvalidInput);
}

TEST(FeatureView, ProjectsByGroup) {
  FeatureSpace space;
  auto a = space.intern("suf1:g"), b = space.intern("cap"), c = space.intern("t-1:DT");
  FeatureView v{"lex", {"suf1", "cap"}};
  auto out = v.project(SparseExample::from({a, b, c}), space);
  EXPECT_EQ(out.features, (std::vector<FeatureId>{a, b}));
  EXPECT_EQ(FeatureSpace::group_of("t-1&t+1:DT&NN"), "t-1&t+1");
}
