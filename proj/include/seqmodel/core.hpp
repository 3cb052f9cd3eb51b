// Sequential model: an ordered pipeline of probabilistic stage classifiers
// whose label distributions are multiplied and thresholded so that every
// stage competes over a smaller (or equal) candidate set than the last.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace seqm {

using LabelId = std::uint32_t;
using FeatureId = std::uint32_t;

inline constexpr double kNormTolerance = 1e-9;

// ---------------------------------------------------------------------------
// Errors

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// Every survivor received zero mass from the running product.
class DegenerateProduct : public Error {
 public:
  using Error::Error;
};

class StageFailure : public Error {
 public:
  StageFailure(std::size_t stage, const std::string& what)
      : Error("stage " + std::to_string(stage) + ": " + what), stage_(stage) {}
  std::size_t stage() const noexcept { return stage_; }

 private:
  std::size_t stage_;
};

class ParseError : public Error {
 public:
  ParseError(std::string source, std::size_t line, const std::string& what)
      : Error(source + ":" + std::to_string(line) + ": " + what),
        source_(std::move(source)),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }
  const std::string& source() const noexcept { return source_; }

 private:
  std::string source_;
  std::size_t line_;
};

class VersionError : public ParseError {
 public:
  using ParseError::ParseError;
};

// ---------------------------------------------------------------------------
// Labels

class LabelAlphabet {
 public:
  LabelAlphabet() = default;

  explicit LabelAlphabet(std::vector<std::string> names) : names_(std::move(names)) {
    if (names_.size() < 2)
      throw InvalidInput("label alphabet needs at least 2 labels");
    for (std::size_t i = 0; i < names_.size(); ++i) {
      if (names_[i].empty()) throw InvalidInput("empty label name");
      if (!index_.emplace(names_[i], static_cast<LabelId>(i)).second)
        throw InvalidInput("duplicate label name '" + names_[i] + "'");
    }
  }

  std::size_t size() const noexcept { return names_.size(); }
  const std::string& name(LabelId id) const { return names_.at(id); }
  const std::vector<std::string>& names() const noexcept { return names_; }

  std::optional<LabelId> find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  LabelId id(std::string_view name) const {
    if (auto found = find(name)) return *found;
    throw InvalidInput("unknown label '" + std::string(name) + "'");
  }

  bool operator==(const LabelAlphabet& other) const { return names_ == other.names_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, LabelId> index_;
};

// ---------------------------------------------------------------------------
// Examples and feature space

/// Binary-feature example: the set of active feature ids.
struct SparseExample {
  std::vector<FeatureId> features;  // sorted, distinct
  std::optional<LabelId> gold;

  static SparseExample from(std::vector<FeatureId> ids, std::optional<LabelId> gold = std::nullopt) {
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    return SparseExample{std::move(ids), gold};
  }

  bool has(FeatureId f) const { return std::binary_search(features.begin(), features.end(), f); }
};

/// Interns feature names to dense ids. The group of a feature is the part of
/// its name before the first ':' (the whole name when there is none); domain
/// views select features by group.
class FeatureSpace {
 public:
  FeatureId intern(std::string_view name) {
    auto it = index_.find(std::string(name));
    if (it != index_.end()) return it->second;
    auto id = static_cast<FeatureId>(names_.size());
    names_.emplace_back(name);
    index_.emplace(names_.back(), id);
    groups_.push_back(intern_group(group_of(name)));
    return id;
  }

  std::optional<FeatureId> find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  const std::string& name(FeatureId id) const { return names_.at(id); }
  std::size_t size() const noexcept { return names_.size(); }
  std::uint32_t group(FeatureId id) const { return groups_.at(id); }
  std::size_t group_count() const noexcept { return group_names_.size(); }

  std::optional<std::uint32_t> find_group(std::string_view g) const {
    for (std::size_t i = 0; i < group_names_.size(); ++i)
      if (group_names_[i] == g) return static_cast<std::uint32_t>(i);
    return std::nullopt;
  }

  static std::string_view group_of(std::string_view name) {
    auto colon = name.find(':');
    return colon == std::string_view::npos ? name : name.substr(0, colon);
  }

  bool operator==(const FeatureSpace& other) const { return names_ == other.names_; }

 private:
  std::uint32_t intern_group(std::string_view g) {
    if (auto found = find_group(g)) return *found;
    group_names_.emplace_back(g);
    return static_cast<std::uint32_t>(group_names_.size() - 1);
  }

  std::vector<std::string> names_;
  std::unordered_map<std::string, FeatureId> index_;
  std::vector<std::uint32_t> groups_;
  std::vector<std::string> group_names_;
};

/// A named feature subspace X^i: the union of a list of feature groups.
/// The view named "all" selects every feature.
struct FeatureView {
  std::string name;
  std::vector<std::string> groups;

  bool selects_all() const { return name == "all"; }

  SparseExample project(const SparseExample& x, const FeatureSpace& space) const {
    if (selects_all()) return x;
    std::vector<char> mask(space.group_count(), 0);
    for (const auto& g : groups)
      if (auto id = space.find_group(g)) mask[*id] = 1;
    SparseExample out;
    out.gold = x.gold;
    for (FeatureId f : x.features)
      if (f < space.size() && mask[space.group(f)]) out.features.push_back(f);
    return out;
  }

  bool operator==(const FeatureView&) const = default;
};

// ---------------------------------------------------------------------------
// Confusion sets and distributions

/// Non-empty set of surviving labels, kept sorted by id.
class ConfusionSet {
 public:
  explicit ConfusionSet(std::vector<LabelId> members) : members_(std::move(members)) {
    std::sort(members_.begin(), members_.end());
    members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
    if (members_.empty()) throw InvalidInput("confusion set must be non-empty");
  }

  static ConfusionSet full(std::size_t m) {
    std::vector<LabelId> all(m);
    for (std::size_t i = 0; i < m; ++i) all[i] = static_cast<LabelId>(i);
    return ConfusionSet(std::move(all));
  }

  static ConfusionSet singleton(LabelId c) { return ConfusionSet({c}); }

  const std::vector<LabelId>& members() const noexcept { return members_; }
  std::size_t size() const noexcept { return members_.size(); }
  bool contains(LabelId c) const { return std::binary_search(members_.begin(), members_.end(), c); }
  auto begin() const { return members_.begin(); }
  auto end() const { return members_.end(); }

  bool subset_of(const ConfusionSet& other) const {
    return std::includes(other.members_.begin(), other.members_.end(), members_.begin(), members_.end());
  }

  bool operator==(const ConfusionSet&) const = default;

 private:
  std::vector<LabelId> members_;
};

/// Probability vector over the whole alphabet; labels outside the support
/// carry exactly zero.
class LabelDistribution {
 public:
  LabelDistribution() = default;

  /// Normalizes non-negative weights. Throws InvalidInput when the total is
  /// zero, negative, or not finite.
  static LabelDistribution from_weights(std::vector<double> weights) {
    double total = 0.0;
    for (double w : weights) {
      if (!(w >= 0.0) || !std::isfinite(w)) throw InvalidInput("distribution weight must be finite and >= 0");
      total += w;
    }
    if (!(total > 0.0)) throw InvalidInput("distribution has empty support");
    for (double& w : weights) w /= total;
    LabelDistribution d;
    d.probs_ = std::move(weights);
    return d;
  }

  static LabelDistribution uniform(std::size_t m, const ConfusionSet& cs) {
    std::vector<double> w(m, 0.0);
    for (LabelId c : cs) w.at(c) = 1.0;
    return from_weights(std::move(w));
  }

  std::size_t size() const noexcept { return probs_.size(); }
  double operator[](LabelId c) const { return probs_.at(c); }
  const std::vector<double>& probs() const noexcept { return probs_; }

  std::vector<LabelId> support() const {
    std::vector<LabelId> s;
    for (std::size_t i = 0; i < probs_.size(); ++i)
      if (probs_[i] > 0.0) s.push_back(static_cast<LabelId>(i));
    return s;
  }

  bool normalized(double tol = kNormTolerance) const {
    double total = 0.0;
    for (double p : probs_) total += p;
    return std::abs(total - 1.0) <= tol;
  }

  /// Highest-probability label among `cs`; ties go to the lowest id.
  LabelId argmax(const ConfusionSet& cs) const {
    LabelId best = *cs.begin();
    for (LabelId c : cs)
      if (probs_.at(c) > probs_.at(best)) best = c;
    return best;
  }

  bool operator==(const LabelDistribution&) const = default;

 private:
  std::vector<double> probs_;
};

// ---------------------------------------------------------------------------
// Stage classifiers

/// Contract for a stage f_i: given its view of the example and the incoming
/// confusion set, emit a distribution with zero mass outside that set.
class StageClassifier {
 public:
  virtual ~StageClassifier() = default;
  virtual std::string_view kind() const = 0;
  virtual LabelDistribution predict(const SparseExample& x, const ConfusionSet& cs) const = 0;
  /// Payload lines for the model file. Feature references are written by name.
  virtual void write_payload(std::ostream& os, const FeatureSpace& space, const LabelAlphabet& alphabet) const = 0;
  virtual bool equals(const StageClassifier& other) const = 0;
};

// ---------------------------------------------------------------------------
// Stage filtering and combination

/// Labels of `prev` whose probability exceeds `epsilon`. When nothing
/// survives, the argmax label of `prev` alone is kept so the set is never empty.
inline ConfusionSet stage_filter(const LabelDistribution& dist, double epsilon, const ConfusionSet& prev) {
  if (dist.support().empty()) throw InvalidInput("stage_filter: distribution has empty support");
  std::vector<LabelId> kept;
  for (LabelId c : prev)
    if (dist[c] > epsilon) kept.push_back(c);
  if (!kept.empty()) return ConfusionSet(std::move(kept));
  return ConfusionSet::singleton(dist.argmax(prev));
}

/// Pointwise product of two distributions restricted to `survivors`,
/// accumulated in the log domain and renormalized.
inline LabelDistribution combine_distributions(const LabelDistribution& running, const LabelDistribution& next,
                                               const ConfusionSet& survivors) {
  if (running.size() != next.size()) throw InvalidInput("combine_distributions: size mismatch");
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  std::vector<double> logs(running.size(), kNegInf);
  double top = kNegInf;
  for (LabelId c : survivors) {
    double a = running[c], b = next[c];
    if (a > 0.0 && b > 0.0) {
      logs[c] = std::log(a) + std::log(b);
      top = std::max(top, logs[c]);
    }
  }
  if (top == kNegInf) throw DegenerateProduct("product of stage distributions is zero on every survivor");
  std::vector<double> w(running.size(), 0.0);
  for (LabelId c : survivors)
    if (logs[c] != kNegInf) w[c] = std::exp(logs[c] - top);
  return LabelDistribution::from_weights(std::move(w));
}

// ---------------------------------------------------------------------------
// The model

enum class CombineMode { product, replace };

inline std::string_view to_string(CombineMode mode) { return mode == CombineMode::product ? "product" : "replace"; }

inline CombineMode parse_combine_mode(std::string_view s) {
  if (s == "product") return CombineMode::product;
  if (s == "replace") return CombineMode::replace;
  throw InvalidInput("unknown combine mode '" + std::string(s) + "'");
}

struct Stage {
  std::string name;  // payload reference; stages may share a classifier
  std::shared_ptr<const StageClassifier> classifier;
  double epsilon = 0.0;
  std::string view = "all";
};

struct SequentialModel {
  LabelAlphabet alphabet;
  std::shared_ptr<FeatureSpace> features = std::make_shared<FeatureSpace>();
  std::map<std::string, FeatureView> views;
  std::vector<Stage> stages;
  CombineMode combine = CombineMode::product;

  const FeatureView* find_view(const std::string& name) const {
    static const FeatureView kAll{"all", {}};
    if (name == "all") return &kAll;
    auto it = views.find(name);
    return it == views.end() ? nullptr : &it->second;
  }

  void add_view(FeatureView view) {
    auto name = view.name;
    views[name] = std::move(view);
  }
};

struct StageRecord {
  ConfusionSet input;
  LabelDistribution emitted;
  ConfusionSet output;
};

struct PredictionTrace {
  std::vector<StageRecord> stages;
  LabelDistribution final_distribution;
  LabelId label = 0;
};

/// Structural problems of a model, one message per violation.
inline std::vector<std::string> sm_validate(const SequentialModel& model) {
  std::vector<std::string> out;
  if (model.alphabet.size() < 2) out.push_back("alphabet has fewer than 2 labels");
  if (model.stages.empty()) out.push_back("model has no stages");
  if (!model.features) out.push_back("model has no feature space");
  for (std::size_t i = 0; i < model.stages.size(); ++i) {
    const auto& s = model.stages[i];
    std::string tag = "stage " + std::to_string(i) + " (" + s.name + ")";
    if (!s.classifier) out.push_back(tag + ": missing classifier");
    if (!(s.epsilon >= 0.0 && s.epsilon < 1.0)) out.push_back(tag + ": threshold must lie in [0,1)");
    if (!model.find_view(s.view)) out.push_back(tag + ": unknown feature view '" + s.view + "'");
  }
  return out;
}

namespace detail {

inline void check_stage_output(const LabelDistribution& d, const ConfusionSet& cs, std::size_t m) {
  if (d.size() != m) throw InvalidInput("distribution size does not match alphabet");
  if (!d.normalized()) throw InvalidInput("distribution is not normalized");
  for (std::size_t c = 0; c < m; ++c)
    if (d.probs()[c] > 0.0 && !cs.contains(static_cast<LabelId>(c)))
      throw InvalidInput("mass assigned outside the incoming confusion set");
}

}  // namespace detail

/// Runs every stage in order. Stage 0 sees the whole alphabet; each later
/// stage sees the survivors of the one before it.
inline PredictionTrace sm_predict(const SequentialModel& model, const SparseExample& x) {
  const std::size_t m = model.alphabet.size();
  PredictionTrace trace;
  ConfusionSet current = ConfusionSet::full(m);
  LabelDistribution running = LabelDistribution::uniform(m, current);

  for (std::size_t i = 0; i < model.stages.size(); ++i) {
    const Stage& stage = model.stages[i];
    const FeatureView* view = model.find_view(stage.view);
    if (!view || !stage.classifier) throw StageFailure(i, "stage is not resolvable");

    LabelDistribution emitted;
    try {
      emitted = stage.classifier->predict(view->project(x, *model.features), current);
      detail::check_stage_output(emitted, current, m);
    } catch (const DegenerateProduct&) {
      throw;
    } catch (const std::exception& e) {
      throw StageFailure(i, e.what());
    }

    ConfusionSet next = stage_filter(emitted, stage.epsilon, current);
    if (model.combine == CombineMode::product) {
      running = combine_distributions(running, emitted, next);
    } else {
      running = combine_distributions(LabelDistribution::uniform(m, next), emitted, next);
    }
    trace.stages.push_back(StageRecord{current, emitted, next});
    current = std::move(next);
  }

  trace.label = running.argmax(current);
  trace.final_distribution = std::move(running);
  return trace;
}

}  // namespace seqm
