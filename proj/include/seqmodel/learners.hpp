// Stage classifiers: a sparse network of Winnow-trained target nodes (SNoW),
// count-based filters, and an explicit weight table.
#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <ostream>
#include <span>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "seqmodel/core.hpp"
#include "seqmodel/text_format.hpp"

namespace seqm {

// ---------------------------------------------------------------------------
// Winnow / SNoW

struct WinnowParams {
  double promotion = 1.5;       // alpha > 1
  double demotion = 0.8;        // 0 < beta < 1
  double threshold = 1.0;       // theta
  double initial_weight = 0.0;  // w0; <= 0 means "estimate from the data"
  double temperature = 1.0;     // sigmoid scale T
  int max_epochs = 5;
  bool demote_all = true;  // false: only the highest-scoring wrong label

  void validate() const {
    if (!(promotion > 1.0)) throw InvalidInput("winnow promotion must be > 1");
    if (!(demotion > 0.0 && demotion < 1.0)) throw InvalidInput("winnow demotion must lie in (0,1)");
    if (!(threshold > 0.0)) throw InvalidInput("winnow threshold must be > 0");
    if (!(temperature > 0.0)) throw InvalidInput("winnow temperature must be > 0");
    if (max_epochs < 0) throw InvalidInput("max epochs must be >= 0");
  }

  bool operator==(const WinnowParams&) const = default;
};

/// One per label. Absent features are not linked to the node.
struct TargetNode {
  LabelId label = 0;
  std::unordered_map<FeatureId, double> weights;

  double raw(const SparseExample& x) const {
    double sum = 0.0;
    for (FeatureId f : x.features) {
      auto it = weights.find(f);
      if (it != weights.end()) sum += it->second;
    }
    return sum;
  }

  bool operator==(const TargetNode&) const = default;
};

inline double sigmoid_activation(double raw, const WinnowParams& params) {
  return 1.0 / (1.0 + std::exp(-(raw - params.threshold) / params.temperature));
}

/// a_c(x) in [0,1]. Unlinked features contribute nothing at prediction time.
inline double activation(const TargetNode& node, const SparseExample& x, const WinnowParams& params) {
  return sigmoid_activation(node.raw(x), params);
}

class SnowNetwork final : public StageClassifier {
 public:
  SnowNetwork(LabelAlphabet alphabet, WinnowParams params, std::shared_ptr<FeatureSpace> space)
      : alphabet_(std::move(alphabet)), params_(params), space_(std::move(space)) {
    params_.validate();
    nodes_.resize(alphabet_.size());
    for (std::size_t i = 0; i < nodes_.size(); ++i) nodes_[i].label = static_cast<LabelId>(i);
  }

  std::string_view kind() const override { return "snow"; }

  const LabelAlphabet& alphabet() const noexcept { return alphabet_; }
  const WinnowParams& params() const noexcept { return params_; }
  WinnowParams& params() noexcept { return params_; }
  const std::vector<TargetNode>& nodes() const noexcept { return nodes_; }
  std::vector<TargetNode>& nodes() noexcept { return nodes_; }
  const std::shared_ptr<FeatureSpace>& space() const noexcept { return space_; }

  LabelDistribution predict(const SparseExample& x, const ConfusionSet& cs) const override;

  void write_payload(std::ostream& os, const FeatureSpace& space, const LabelAlphabet& alphabet) const override;

  bool equals(const StageClassifier& other) const override {
    auto* o = dynamic_cast<const SnowNetwork*>(&other);
    return o && o->alphabet_ == alphabet_ && o->params_ == params_ && o->nodes_ == nodes_;
  }

 private:
  LabelAlphabet alphabet_;
  WinnowParams params_;
  std::vector<TargetNode> nodes_;
  std::shared_ptr<FeatureSpace> space_;
};

/// Activations over `cs` only, normalized to sum 1 over `cs`.
inline LabelDistribution snow_predict(const SnowNetwork& net, const SparseExample& x, const ConfusionSet& cs) {
  std::vector<double> w(net.alphabet().size(), 0.0);
  double total = 0.0;
  for (LabelId c : cs) {
    w.at(c) = activation(net.nodes()[c], x, net.params());
    total += w[c];
  }
  if (!(total > 0.0) || !std::isfinite(total)) return LabelDistribution::uniform(net.alphabet().size(), cs);
  return LabelDistribution::from_weights(std::move(w));
}

inline LabelDistribution SnowNetwork::predict(const SparseExample& x, const ConfusionSet& cs) const {
  return snow_predict(*this, x, cs);
}

struct WinnowStep {
  std::size_t updates = 0;  // node-updates: promotions plus demotions
  bool filtered = false;    // gold was outside the confusion set; nothing trained
};

/// Presents one example to the nodes of `cs`. Every presented node links the
/// example's unlinked active features at w0 before scoring. Mistake-driven:
/// promote the gold node if raw <= theta, demote wrong nodes with raw > theta.
inline WinnowStep winnow_train_example(SnowNetwork& net, const SparseExample& x, LabelId gold,
                                       const ConfusionSet& cs) {
  WinnowStep step;
  if (!cs.contains(gold)) {
    step.filtered = true;
    return step;
  }
  const WinnowParams& p = net.params();
  if (!(p.initial_weight > 0.0)) throw InvalidInput("winnow initial weight is not set");

  auto& nodes = net.nodes();
  for (LabelId c : cs)
    for (FeatureId f : x.features) nodes[c].weights.try_emplace(f, p.initial_weight);

  auto scale = [&](TargetNode& node, double factor) {
    for (FeatureId f : x.features) node.weights[f] *= factor;
  };

  if (nodes[gold].raw(x) <= p.threshold) {
    scale(nodes[gold], p.promotion);
    ++step.updates;
  }

  if (p.demote_all) {
    for (LabelId c : cs) {
      if (c == gold) continue;
      if (nodes[c].raw(x) > p.threshold) {
        scale(nodes[c], p.demotion);
        ++step.updates;
      }
    }
  } else {
    std::optional<LabelId> worst;
    double worst_raw = p.threshold;
    for (LabelId c : cs) {
      if (c == gold) continue;
      double r = nodes[c].raw(x);
      if (r > worst_raw) {
        worst_raw = r;
        worst = c;
      }
    }
    if (worst) {
      scale(nodes[*worst], p.demotion);
      ++step.updates;
    }
  }
  return step;
}

struct TrainingExample {
  SparseExample x;
  LabelId gold = 0;
  ConfusionSet cs = ConfusionSet::singleton(0);
};

struct TrainingReport {
  std::vector<std::size_t> epoch_mistakes;  // examples that triggered at least one update
  std::vector<std::size_t> epoch_updates;
  std::size_t total_updates = 0;
  std::size_t presentations = 0;  // (example, node) pairs scored: the sum of |cs| over epochs
  std::size_t filtered = 0;  // per epoch; identical across epochs
  std::size_t examples = 0;
  double seconds = 0.0;
  bool converged = false;  // last epoch made zero updates

  std::size_t epochs() const { return epoch_updates.size(); }
};

/// 0.1 * theta / (mean number of active features), the default w0.
inline double estimate_initial_weight(std::span<const TrainingExample> examples, double threshold) {
  double active = 0.0;
  for (const auto& e : examples) active += static_cast<double>(e.x.features.size());
  double mean = examples.empty() ? 1.0 : active / static_cast<double>(examples.size());
  return 0.1 * threshold / std::max(mean, 1.0);
}

/// Runs epochs until one makes no update or the epoch cap is reached.
inline TrainingReport train_epochs(SnowNetwork& net, std::span<const TrainingExample> examples) {
  TrainingReport report;
  report.examples = examples.size();
  if (!(net.params().initial_weight > 0.0))
    net.params().initial_weight = estimate_initial_weight(examples, net.params().threshold);

  auto start = std::chrono::steady_clock::now();
  if (!examples.empty()) {
    for (int epoch = 0; epoch < net.params().max_epochs; ++epoch) {
      std::size_t updates = 0, mistakes = 0, filtered = 0;
      for (const auto& e : examples) {
        WinnowStep step = winnow_train_example(net, e.x, e.gold, e.cs);
        if (!step.filtered) report.presentations += e.cs.size();
        filtered += step.filtered;
        updates += step.updates;
        mistakes += step.updates > 0;
      }
      report.epoch_updates.push_back(updates);
      report.epoch_mistakes.push_back(mistakes);
      report.total_updates += updates;
      report.filtered = filtered;
      if (updates == 0) {
        report.converged = true;
        break;
      }
    }
  }
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

// ---------------------------------------------------------------------------
// Count filters

/// Label counts per feature. Prediction sums rows of the active features and
/// drops labels whose total is below min-support; no smoothing.
class CountClassifier final : public StageClassifier {
 public:
  CountClassifier(LabelAlphabet alphabet, std::uint64_t min_support = 1)
      : alphabet_(std::move(alphabet)), min_support_(min_support) {
    if (min_support_ < 1) throw InvalidInput("min-support must be >= 1");
  }

  std::string_view kind() const override { return "count"; }

  void train(FeatureId feature, LabelId gold, std::uint64_t times = 1) {
    if (gold >= alphabet_.size()) throw InvalidInput("count_train: label out of range");
    if (times == 0) return;
    auto& row = table_[feature];
    if (row.empty()) row.assign(alphabet_.size(), 0);
    row[gold] += times;
  }

  /// Removes counts previously added (used to build held-out complements).
  void subtract(const CountClassifier& other) {
    for (const auto& [f, row] : other.table_) {
      auto it = table_.find(f);
      if (it == table_.end()) continue;
      bool any = false;
      for (std::size_t c = 0; c < row.size(); ++c) {
        it->second[c] -= std::min(it->second[c], row[c]);
        any |= it->second[c] > 0;
      }
      if (!any) table_.erase(it);
    }
  }

  LabelDistribution predict(const SparseExample& x, const ConfusionSet& cs) const override {
    std::vector<double> totals(alphabet_.size(), 0.0);
    for (FeatureId f : x.features) {
      auto it = table_.find(f);
      if (it == table_.end()) continue;
      for (LabelId c : cs) totals[c] += static_cast<double>(it->second[c]);
    }
    bool any = false;
    for (LabelId c : cs) {
      if (totals[c] < static_cast<double>(min_support_)) totals[c] = 0.0;
      any |= totals[c] > 0.0;
    }
    if (!any) return LabelDistribution::uniform(alphabet_.size(), cs);
    return LabelDistribution::from_weights(std::move(totals));
  }

  void write_payload(std::ostream& os, const FeatureSpace& space, const LabelAlphabet& alphabet) const override;

  bool equals(const StageClassifier& other) const override {
    auto* o = dynamic_cast<const CountClassifier*>(&other);
    return o && o->alphabet_ == alphabet_ && o->min_support_ == min_support_ && o->table_ == table_;
  }

  const LabelAlphabet& alphabet() const noexcept { return alphabet_; }
  std::uint64_t min_support() const noexcept { return min_support_; }
  const std::unordered_map<FeatureId, std::vector<std::uint64_t>>& table() const noexcept { return table_; }

 private:
  LabelAlphabet alphabet_;
  std::uint64_t min_support_;
  std::unordered_map<FeatureId, std::vector<std::uint64_t>> table_;
};

inline void count_train(CountClassifier& cc, FeatureId feature, LabelId gold) { cc.train(feature, gold); }

inline LabelDistribution count_predict(const CountClassifier& cc, const SparseExample& x, const ConfusionSet& cs) {
  return cc.predict(x, cs);
}

// ---------------------------------------------------------------------------
// Weight table

/// Fixed non-negative weights: the product of the rows of all active features
/// that have one, times the default row. Used for classifiers whose
/// distributions are known in closed form. When every candidate ends up with
/// zero weight the stage abstains with a uniform distribution.
class TableClassifier final : public StageClassifier {
 public:
  explicit TableClassifier(std::size_t m) : m_(m) {}

  std::string_view kind() const override { return "table"; }

  void set_row(FeatureId f, std::vector<double> weights) {
    if (weights.size() != m_) throw InvalidInput("table row size mismatch");
    rows_[f] = std::move(weights);
  }
  void set_default(std::vector<double> weights) {
    if (weights.size() != m_) throw InvalidInput("table row size mismatch");
    default_ = std::move(weights);
  }

  LabelDistribution predict(const SparseExample& x, const ConfusionSet& cs) const override {
    std::vector<double> w(m_, 0.0);
    for (LabelId c : cs) w[c] = default_ ? (*default_)[c] : 1.0;
    for (FeatureId f : x.features) {
      auto it = rows_.find(f);
      if (it == rows_.end()) continue;
      for (LabelId c : cs) w[c] *= it->second[c];
    }
    double total = 0.0;
    for (LabelId c : cs) total += w[c];
    if (!(total > 0.0)) return LabelDistribution::uniform(m_, cs);  // no candidate has weight: abstain
    return LabelDistribution::from_weights(std::move(w));
  }

  void write_payload(std::ostream& os, const FeatureSpace& space, const LabelAlphabet& alphabet) const override;

  bool equals(const StageClassifier& other) const override {
    auto* o = dynamic_cast<const TableClassifier*>(&other);
    return o && o->m_ == m_ && o->rows_ == rows_ && o->default_ == default_;
  }

  std::size_t labels() const noexcept { return m_; }
  const std::unordered_map<FeatureId, std::vector<double>>& rows() const noexcept { return rows_; }
  const std::optional<std::vector<double>>& default_row() const noexcept { return default_; }

 private:
  std::size_t m_;
  std::unordered_map<FeatureId, std::vector<double>> rows_;
  std::optional<std::vector<double>> default_;
};

// ---------------------------------------------------------------------------
// Binary empirical-loss minimizer

/// Linear hypothesis h(x) = w.x + b fitted by exact least squares on +/-1
/// targets, i.e. it minimizes the empirical squared loss (1 - y h(x))^2.
struct LinearHypothesis {
  Eigen::VectorXd w;
  double b = 0.0;

  double operator()(const Eigen::VectorXd& x) const { return w.dot(x) + b; }
};

inline double squared_margin_loss(double margin) { return (1.0 - margin) * (1.0 - margin); }

inline LinearHypothesis train_least_squares(const std::vector<Eigen::VectorXd>& xs, const std::vector<int>& ys) {
  if (xs.empty() || xs.size() != ys.size()) throw InvalidInput("least squares: empty or mismatched sample");
  const Eigen::Index d = xs.front().size();
  Eigen::MatrixXd a(static_cast<Eigen::Index>(xs.size()), d + 1);
  Eigen::VectorXd y(static_cast<Eigen::Index>(xs.size()));
  for (std::size_t i = 0; i < xs.size(); ++i) {
    a.row(static_cast<Eigen::Index>(i)).head(d) = xs[i].transpose();
    a(static_cast<Eigen::Index>(i), d) = 1.0;
    y(static_cast<Eigen::Index>(i)) = ys[i];
  }
  Eigen::VectorXd sol = a.colPivHouseholderQr().solve(y);
  return LinearHypothesis{sol.head(d), sol(d)};
}

inline double empirical_loss(const LinearHypothesis& h, const std::vector<Eigen::VectorXd>& xs,
                             const std::vector<int>& ys,
                             const std::function<double(double)>& loss = squared_margin_loss) {
  double total = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) total += loss(ys[i] * h(xs[i]));
  return xs.empty() ? 0.0 : total / static_cast<double>(xs.size());
}

// ---------------------------------------------------------------------------
// Payload writers. Rows and links are sorted by feature name so the output
// does not depend on hash-table iteration order.

namespace detail {

template <class Map>
std::vector<std::pair<std::string, typename Map::const_iterator>> by_feature_name(const Map& map,
                                                                                  const FeatureSpace& space) {
  std::vector<std::pair<std::string, typename Map::const_iterator>> out;
  out.reserve(map.size());
  for (auto it = map.begin(); it != map.end(); ++it) out.emplace_back(text::escape(space.name(it->first)), it);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

}  // namespace detail

inline void SnowNetwork::write_payload(std::ostream& os, const FeatureSpace& space,
                                       const LabelAlphabet& alphabet) const {
  os << "params promotion=" << text::format_double(params_.promotion)
     << " demotion=" << text::format_double(params_.demotion)
     << " threshold=" << text::format_double(params_.threshold)
     << " initial_weight=" << text::format_double(params_.initial_weight)
     << " temperature=" << text::format_double(params_.temperature) << " max_epochs=" << params_.max_epochs
     << " demote_all=" << (params_.demote_all ? 1 : 0) << '\n';
  os << "nodes " << nodes_.size() << '\n';
  for (const auto& node : nodes_) {
    os << "node " << text::escape(alphabet.name(node.label)) << ' ' << node.weights.size() << '\n';
    for (const auto& [name, it] : detail::by_feature_name(node.weights, space))
      os << name << ' ' << text::format_double(it->second) << '\n';
  }
}

inline void CountClassifier::write_payload(std::ostream& os, const FeatureSpace& space,
                                           const LabelAlphabet& alphabet) const {
  os << "min_support " << min_support_ << '\n';
  os << "rows " << table_.size() << '\n';
  for (const auto& [name, it] : detail::by_feature_name(table_, space)) {
    std::size_t nonzero = 0;
    for (auto v : it->second) nonzero += v > 0;
    os << name << ' ' << nonzero;
    for (std::size_t c = 0; c < it->second.size(); ++c)
      if (it->second[c] > 0) os << ' ' << text::escape(alphabet.name(static_cast<LabelId>(c))) << ':' << it->second[c];
    os << '\n';
  }
}

inline void TableClassifier::write_payload(std::ostream& os, const FeatureSpace& space,
                                           const LabelAlphabet&) const {
  auto row = [&](const std::vector<double>& w) {
    for (double v : w) os << ' ' << text::format_double(v);
  };
  os << "labels " << m_ << '\n';
  if (default_) {
    os << "default";
    row(*default_);
    os << '\n';
  } else {
    os << "default none\n";
  }
  os << "rows " << rows_.size() << '\n';
  for (const auto& [name, it] : detail::by_feature_name(rows_, space)) {
    os << name;
    row(it->second);
    os << '\n';
  }
}

}  // namespace seqm
