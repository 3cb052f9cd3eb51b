// Small builders shared by the unit tests.
#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "seqmodel/core.hpp"
#include "seqmodel/features.hpp"
#include "seqmodel/learners.hpp"

namespace testing_util {

inline seqm::LabelDistribution dist(std::vector<double> w) { return seqm::LabelDistribution::from_weights(std::move(w)); }

inline seqm::ConfusionSet set(std::vector<seqm::LabelId> ids) { return seqm::ConfusionSet(std::move(ids)); }

/// "The/DT dog/NN ./." per sentence; splits at the last '/'.
inline seqm::TaggedCorpus corpus(const std::vector<std::string>& sentences) {
  seqm::TaggedCorpus c;
  for (const auto& line : sentences) {
    seqm::Sentence s;
    std::istringstream in(line);
    std::string tok;
    while (in >> tok) {
      auto slash = tok.rfind('/');
      s.tokens.push_back({tok.substr(0, slash), tok.substr(slash + 1)});
    }
    c.sentences.push_back(std::move(s));
  }
  return c;
}

inline seqm::Sentence words(const std::string& line) {
  seqm::Sentence s;
  std::istringstream in(line);
  std::string w;
  while (in >> w) s.tokens.push_back({w, std::nullopt});
  return s;
}

/// Fixed distribution regardless of input, restricted to the incoming set.
class FixedClassifier final : public seqm::StageClassifier {
 public:
  explicit FixedClassifier(std::vector<double> w) : w_(std::move(w)) {}
  std::string_view kind() const override { return "fixed"; }
  seqm::LabelDistribution predict(const seqm::SparseExample&, const seqm::ConfusionSet& cs) const override {
    std::vector<double> w(w_.size(), 0.0);
    for (auto c : cs) w[c] = w_[c];
    return seqm::LabelDistribution::from_weights(std::move(w));
  }
  void write_payload(std::ostream&, const seqm::FeatureSpace&, const seqm::LabelAlphabet&) const override {}
  bool equals(const seqm::StageClassifier& o) const override { return &o == this; }

 private:
  std::vector<double> w_;
};

inline seqm::Stage fixed_stage(std::string name, std::vector<double> w, double eps) {
  return seqm::Stage{std::move(name), std::make_shared<FixedClassifier>(std::move(w)), eps, "all"};
}

}  // namespace testing_util
