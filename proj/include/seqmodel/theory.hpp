// Exhaustive checks of the properties that justify the sequential model:
// product-rule equivalence under conditional independence, the nested
// confusion-set error bound, training on the restricted class range, and
// the decision-tree construction. Everything here enumerates small domains
// exactly; randomized checks take explicit seeds.
#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iomanip>
#include <memory>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "seqmodel/core.hpp"
#include "seqmodel/decision_tree.hpp"
#include "seqmodel/learners.hpp"
#include "seqmodel/text_format.hpp"

namespace seqm::theory {

/// Relative tolerance under which two scores count as tied. Both argmax routes
/// use it, so rounding noise in mathematically equal scores cannot split them.
inline constexpr double kTieTolerance = 1e-12;

/// Lowest index whose score is within kTieTolerance of the maximum.
inline LabelId tolerant_argmax(const std::vector<double>& scores) {
  double top = *std::max_element(scores.begin(), scores.end());
  for (std::size_t c = 0; c < scores.size(); ++c)
    if (scores[c] >= top - kTieTolerance * std::abs(top)) return static_cast<LabelId>(c);
  return 0;
}

// ---------------------------------------------------------------------------
// Joint distributions over (class, x^1..x^N)

/// Feature blocks index a mixed-radix domain: x = (x^1..x^N), x^k < arity[k].
struct BlockDomain {
  std::vector<std::size_t> arity;

  std::size_t size() const {
    return std::accumulate(arity.begin(), arity.end(), std::size_t{1}, std::multiplies<>());
  }

  std::vector<std::size_t> decode(std::size_t index) const {
    std::vector<std::size_t> x(arity.size());
    for (std::size_t k = 0; k < arity.size(); ++k) {
      x[k] = index % arity[k];
      index /= arity[k];
    }
    return x;
  }
};

/// Explicit joint table p(c, x), row-major in c.
struct JointTable {
  std::size_t classes = 0;
  BlockDomain domain;
  std::vector<double> p;

  double operator()(std::size_t c, std::size_t x) const { return p[c * domain.size() + x]; }

  std::vector<double> prior() const {
    std::vector<double> out(classes, 0.0);
    for (std::size_t c = 0; c < classes; ++c)
      for (std::size_t x = 0; x < domain.size(); ++x) out[c] += (*this)(c, x);
    return out;
  }

  double marginal(std::size_t x) const {
    double s = 0.0;
    for (std::size_t c = 0; c < classes; ++c) s += (*this)(c, x);
    return s;
  }

  /// p(c | x^k = v), computed from the table.
  std::vector<double> block_posterior(std::size_t k, std::size_t v) const {
    std::vector<double> out(classes, 0.0);
    double total = 0.0;
    for (std::size_t x = 0; x < domain.size(); ++x) {
      if (domain.decode(x)[k] != v) continue;
      for (std::size_t c = 0; c < classes; ++c) {
        out[c] += (*this)(c, x);
        total += (*this)(c, x);
      }
    }
    if (total > 0.0)
      for (double& o : out) o /= total;
    return out;
  }
};

/// Class prior and per-block conditionals p(x^k | c); the joint factorizes as
/// p(c) * prod_k p(x^k | c).
struct SyntheticSpec {
  std::vector<double> prior;
  std::vector<std::size_t> arity;
  std::vector<std::vector<std::vector<double>>> conditional;  // [k][c][v]

  std::size_t classes() const { return prior.size(); }
  std::size_t blocks() const { return arity.size(); }
  BlockDomain domain() const { return BlockDomain{arity}; }

  void validate() const {
    auto sums_to_one = [](const std::vector<double>& v) {
      double s = 0.0;
      for (double x : v) {
        if (!(x >= 0.0)) return false;
        s += x;
      }
      return std::abs(s - 1.0) <= 1e-9;
    };
    if (classes() < 2) throw InvalidInput("spec needs at least 2 classes");
    if (!sums_to_one(prior)) throw InvalidInput("spec prior must sum to 1");
    if (conditional.size() != blocks()) throw InvalidInput("spec needs one conditional table per block");
    for (std::size_t k = 0; k < blocks(); ++k) {
      if (arity[k] < 1 || conditional[k].size() != classes()) throw InvalidInput("malformed conditional table");
      for (const auto& row : conditional[k])
        if (row.size() != arity[k] || !sums_to_one(row)) throw InvalidInput("conditional rows must sum to 1");
    }
    if (domain().size() > 1'000'000) throw InvalidInput("spec domain is not enumerable");
  }

  /// p(c) * prod_k p(x^k | c) for every class.
  std::vector<double> joint_scores(const std::vector<std::size_t>& x) const {
    std::vector<double> s(prior);
    for (std::size_t c = 0; c < classes(); ++c)
      for (std::size_t k = 0; k < blocks(); ++k) s[c] *= conditional[k][c][x[k]];
    return s;
  }

  /// p(c | x^k = v) by Bayes rule on the spec's own tables.
  std::vector<double> block_posterior(std::size_t k, std::size_t v) const {
    std::vector<double> out(classes());
    double total = 0.0;
    for (std::size_t c = 0; c < classes(); ++c) {
      out[c] = conditional[k][c][v] * prior[c];
      total += out[c];
    }
    if (total > 0.0)
      for (double& o : out) o /= total;
    return out;
  }

  JointTable joint() const {
    JointTable t{classes(), domain(), {}};
    t.p.resize(classes() * t.domain.size());
    for (std::size_t x = 0; x < t.domain.size(); ++x) {
      auto s = joint_scores(t.domain.decode(x));
      for (std::size_t c = 0; c < classes(); ++c) t.p[c * t.domain.size() + x] = s[c];
    }
    return t;
  }
};

namespace detail {

inline std::vector<double> dirichlet(std::mt19937_64& rng, std::size_t n) {
  std::gamma_distribution<double> g(1.0, 1.0);
  std::vector<double> v(n);
  double s = 0.0;
  for (double& x : v) s += (x = g(rng) + 1e-12);
  for (double& x : v) x /= s;
  return v;
}

}  // namespace detail

/// Random spec with m classes and N blocks of arity 2..max_arity. Every
/// table entry is drawn from a flat Dirichlet.
inline SyntheticSpec random_spec(std::mt19937_64& rng, std::size_t m, std::size_t n_blocks, std::size_t max_arity) {
  SyntheticSpec spec;
  spec.prior = detail::dirichlet(rng, m);
  std::uniform_int_distribution<std::size_t> ar(2, std::max<std::size_t>(2, max_arity));
  for (std::size_t k = 0; k < n_blocks; ++k) {
    spec.arity.push_back(ar(rng));
    std::vector<std::vector<double>> rows;
    for (std::size_t c = 0; c < m; ++c) rows.push_back(detail::dirichlet(rng, spec.arity.back()));
    spec.conditional.push_back(std::move(rows));
  }
  spec.validate();
  return spec;
}

// ---------------------------------------------------------------------------
// Product-rule equivalence

/// argmax_c p(c) prod_k p(x^k | c), i.e. the exact joint posterior argmax.
inline LabelId joint_posterior_argmax(const SyntheticSpec& spec, const std::vector<std::size_t>& x) {
  return tolerant_argmax(spec.joint_scores(x));
}

/// argmax_c prod_k p(c | x^k) / p(c)^(N-1), with each block posterior obtained
/// separately by Bayes rule. Classes with zero prior score zero.
inline LabelId product_rule_argmax(const SyntheticSpec& spec, const std::vector<std::size_t>& x) {
  const std::size_t n = spec.blocks();
  std::vector<double> score(spec.classes(), 1.0);
  for (std::size_t k = 0; k < n; ++k) {
    auto post = spec.block_posterior(k, x[k]);
    for (std::size_t c = 0; c < spec.classes(); ++c) score[c] *= post[c];
  }
  for (std::size_t c = 0; c < spec.classes(); ++c)
    score[c] = spec.prior[c] > 0.0 ? score[c] / std::pow(spec.prior[c], static_cast<double>(n) - 1.0) : 0.0;
  return tolerant_argmax(score);
}

inline std::string block_feature(std::size_t k, std::size_t v) {
  return "b" + std::to_string(k) + ":" + std::to_string(v);
}

/// Sequential model with one stage per block emitting p(c | x^k) and a last
/// stage dividing by p(c)^(N-1); thresholds 0, product combination.
inline SequentialModel block_product_model(const JointTable& joint) {
  std::vector<std::string> names;
  for (std::size_t c = 0; c < joint.classes; ++c) names.push_back("c" + std::to_string(c));
  SequentialModel model;
  model.alphabet = LabelAlphabet(names);
  model.combine = CombineMode::product;
  const std::size_t n = joint.domain.arity.size();
  for (std::size_t k = 0; k < n; ++k) {
    auto table = std::make_shared<TableClassifier>(joint.classes);
    for (std::size_t v = 0; v < joint.domain.arity[k]; ++v)
      table->set_row(model.features->intern(block_feature(k, v)), joint.block_posterior(k, v));
    std::string view = "block" + std::to_string(k);
    model.add_view(FeatureView{view, {"b" + std::to_string(k)}});
    model.stages.push_back(Stage{view, table, 0.0, view});
  }
  auto prior = joint.prior();
  std::vector<double> inverse(joint.classes, 0.0);
  for (std::size_t c = 0; c < joint.classes; ++c)
    if (prior[c] > 0.0) inverse[c] = std::pow(prior[c], -(static_cast<double>(n) - 1.0));
  auto correction = std::make_shared<TableClassifier>(joint.classes);
  correction->set_default(inverse);
  model.add_view(FeatureView{"none", {}});
  model.stages.push_back(Stage{"prior", correction, 0.0, "none"});
  return model;
}

inline SparseExample block_example(const SequentialModel& model, const std::vector<std::size_t>& x) {
  std::vector<FeatureId> ids;
  for (std::size_t k = 0; k < x.size(); ++k)
    if (auto id = model.features->find(block_feature(k, x[k]))) ids.push_back(*id);
  return SparseExample::from(std::move(ids));
}

struct EquivalenceReport {
  std::size_t inputs = 0;      // inputs with positive probability
  std::size_t mismatches = 0;  // SM label differs from the joint argmax
  std::size_t rule_mismatches = 0;  // product-rule argmax differs (specs only)
};

/// Compares the block-product sequential model against the exact joint
/// argmax on every input of positive probability.
inline EquivalenceReport sm_equivalence_check(const JointTable& joint) {
  SequentialModel model = block_product_model(joint);
  EquivalenceReport r;
  for (std::size_t xi = 0; xi < joint.domain.size(); ++xi) {
    if (!(joint.marginal(xi) > 0.0)) continue;
    ++r.inputs;
    std::vector<double> scores(joint.classes);
    for (std::size_t c = 0; c < joint.classes; ++c) scores[c] = joint(c, xi);
    auto trace = sm_predict(model, block_example(model, joint.domain.decode(xi)));
    r.mismatches += trace.label != tolerant_argmax(scores);
  }
  return r;
}

inline EquivalenceReport sm_equivalence_check(const SyntheticSpec& spec) {
  spec.validate();
  EquivalenceReport r = sm_equivalence_check(spec.joint());
  auto domain = spec.domain();
  for (std::size_t xi = 0; xi < domain.size(); ++xi) {
    auto x = domain.decode(xi);
    r.rule_mismatches += product_rule_argmax(spec, x) != joint_posterior_argmax(spec, x);
  }
  return r;
}

/// Two binary blocks whose XOR decides the class: each block alone carries no
/// information, so the product rule cannot recover the joint argmax.
inline JointTable xor_dependent_joint(double strength = 0.9) {
  JointTable t{2, BlockDomain{{2, 2}}, std::vector<double>(8, 0.0)};
  for (std::size_t x = 0; x < 4; ++x) {
    auto bits = t.domain.decode(x);
    bool odd = (bits[0] ^ bits[1]) != 0;
    t.p[1 * 4 + x] = 0.25 * (odd ? strength : 1.0 - strength);
    t.p[0 * 4 + x] = 0.25 * (odd ? 1.0 - strength : strength);
  }
  return t;
}

// ---------------------------------------------------------------------------
// Nested confusion sets

struct NestedSetErrorReport {
  double error_k = 0.0;        // Error_K
  double error_k_prime = 0.0;  // Error_K'
  double pe_distractor = 0.0;  // P(a label of K'\K wins | argmax over K is correct)
  double residual = 0.0;       // (1 - Error_K) * pe_distractor
  double identity_gap = 0.0;   // Error_K' - Error_K - residual
  bool inequality_holds = false;
};

/// argmax of `scores` over `set` (lowest id on exact ties).
inline LabelId set_argmax(const std::vector<double>& scores, const std::vector<LabelId>& set) {
  LabelId best = set.front();
  for (LabelId c : set)
    if (scores[c] > scores[best] || (scores[c] == scores[best] && c < best)) best = c;
  return best;
}

/// Exact expected errors of predicting by the posterior argmax over K and
/// over K' when the target f(x) always lies in K. `target[x]` is f(x) per
/// domain index; the posterior is the spec's joint posterior.
inline NestedSetErrorReport claim1_check(const SyntheticSpec& spec, const std::vector<LabelId>& k_set,
                                         const std::vector<LabelId>& k_prime, const std::vector<LabelId>& target) {
  spec.validate();
  for (LabelId c : k_set)
    if (std::find(k_prime.begin(), k_prime.end(), c) == k_prime.end())
      throw InvalidInput("claim1: K must be a subset of K'");
  auto domain = spec.domain();
  if (target.size() != domain.size()) throw InvalidInput("claim1: one target per input required");

  NestedSetErrorReport r;
  double correct_then_distracted = 0.0;
  for (std::size_t xi = 0; xi < domain.size(); ++xi) {
    if (std::find(k_set.begin(), k_set.end(), target[xi]) == k_set.end())
      throw InvalidInput("claim1: target outside K");
    auto scores = spec.joint_scores(domain.decode(xi));
    double px = std::accumulate(scores.begin(), scores.end(), 0.0);
    LabelId in_k = set_argmax(scores, k_set);
    LabelId in_kp = set_argmax(scores, k_prime);
    if (in_k != target[xi]) r.error_k += px;
    if (in_kp != target[xi]) r.error_k_prime += px;
    if (in_k == target[xi] && in_kp != in_k) correct_then_distracted += px;
  }
  r.pe_distractor = r.error_k < 1.0 ? correct_then_distracted / (1.0 - r.error_k) : 0.0;
  r.residual = (1.0 - r.error_k) * r.pe_distractor;
  r.identity_gap = r.error_k_prime - r.error_k - r.residual;
  r.inequality_holds = r.error_k <= r.error_k_prime;
  return r;
}

/// f(x) drawn once per input from the posterior restricted to K.
inline std::vector<LabelId> sample_targets(const SyntheticSpec& spec, const std::vector<LabelId>& k_set,
                                           std::mt19937_64& rng) {
  auto domain = spec.domain();
  std::vector<LabelId> out(domain.size());
  for (std::size_t xi = 0; xi < domain.size(); ++xi) {
    auto scores = spec.joint_scores(domain.decode(xi));
    std::vector<double> w;
    for (LabelId c : k_set) w.push_back(scores[c] + 1e-300);
    std::discrete_distribution<std::size_t> pick(w.begin(), w.end());
    out[xi] = k_set[pick(rng)];
  }
  return out;
}

/// Error of a filter that reduces K' to K but drops the true label with
/// probability `drop`; a dropped label is always an error.
inline double filtered_error(const NestedSetErrorReport& r, double drop) {
  return (1.0 - drop) * r.error_k + drop;
}

// ---------------------------------------------------------------------------
// Training on the restricted range

struct Claim2Report {
  double train_loss_restricted = 0.0;  // h' (trained on S1, S2) on S1 u S2
  double train_loss_full = 0.0;        // h  (trained on S1, S2, S3) on S1 u S2
  double test_loss_restricted = 0.0;   // both on a fresh c1-vs-c2 sample
  double test_loss_full = 0.0;
};

enum class ThirdClass { empty, random, adversarial };

/// Three 2-D Gaussian classes; c1 (positive) competes only with c2. The
/// binary learner is exact least squares on +/-1 targets.
inline Claim2Report claim2_check(std::uint64_t seed, ThirdClass third, std::size_t per_class = 60,
                                 std::size_t test_size = 4000) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 0.6);
  auto draw = [&](double cx, double cy) {
    Eigen::VectorXd v(2);
    v << cx + noise(rng), cy + noise(rng);
    return v;
  };
  const double c1x = 1.0, c2x = -1.0;

  std::vector<Eigen::VectorXd> xs;
  std::vector<int> ys;
  for (std::size_t i = 0; i < per_class; ++i) {
    xs.push_back(draw(c1x, 0.0));
    ys.push_back(+1);
    xs.push_back(draw(c2x, 0.0));
    ys.push_back(-1);
  }
  auto xs_full = xs;
  auto ys_full = ys;
  if (third != ThirdClass::empty) {
    double cx = c1x, cy = 0.0;
    if (third == ThirdClass::random) {
      std::uniform_real_distribution<double> where(-4.0, 4.0);
      cx = where(rng);
      cy = where(rng);
    }
    for (std::size_t i = 0; i < per_class; ++i) {
      xs_full.push_back(draw(cx, cy));
      ys_full.push_back(-1);
    }
  }

  LinearHypothesis restricted = train_least_squares(xs, ys);
  LinearHypothesis full = train_least_squares(xs_full, ys_full);

  std::vector<Eigen::VectorXd> test;
  std::vector<int> test_y;
  for (std::size_t i = 0; i < test_size / 2; ++i) {
    test.push_back(draw(c1x, 0.0));
    test_y.push_back(+1);
    test.push_back(draw(c2x, 0.0));
    test_y.push_back(-1);
  }

  Claim2Report r;
  r.train_loss_restricted = empirical_loss(restricted, xs, ys);
  r.train_loss_full = empirical_loss(full, xs, ys);
  r.test_loss_restricted = empirical_loss(restricted, test, test_y);
  r.test_loss_full = empirical_loss(full, test, test_y);
  return r;
}

// ---------------------------------------------------------------------------
// Decision trees

struct TreeEquivalenceReport {
  std::size_t inputs = 0;
  std::size_t mismatches = 0;
  std::size_t stages = 0;
  std::size_t internal_nodes = 0;

  bool exact() const { return mismatches == 0 && stages == internal_nodes; }
};

/// Checks a converted model against its tree on all 2^bits inputs.
inline TreeEquivalenceReport dt_equivalence_check(const BinaryDecisionTree& tree, const SequentialModel& model,
                                                  std::uint32_t bits) {
  if (bits > 24) throw InvalidInput("dt equivalence: too many input bits to enumerate");
  TreeEquivalenceReport r;
  r.stages = model.stages.size();
  r.internal_nodes = tree.internal_count();
  for (std::uint64_t v = 0; v < (1ULL << bits); ++v) {
    std::vector<bool> input(bits);
    for (std::uint32_t k = 0; k < bits; ++k) input[k] = (v >> k) & 1U;
    auto trace = sm_predict(model, bits_example(input, *model.features));
    ++r.inputs;
    r.mismatches += model.alphabet.name(trace.label) != tree.predict(input);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Random pipelines for property fuzzing

/// Model of 1..5 table stages over m in [2, 8] labels. Rows contain zeros so
/// stages actually filter; thresholds are drawn from [0, 0.5).
inline SequentialModel random_table_model(std::mt19937_64& rng, std::size_t n_features = 6) {
  std::uniform_int_distribution<std::size_t> m_dist(2, 8), s_dist(1, 5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::size_t m = m_dist(rng);
  std::vector<std::string> names;
  for (std::size_t c = 0; c < m; ++c) names.push_back("L" + std::to_string(c));

  SequentialModel model;
  model.alphabet = LabelAlphabet(names);
  model.combine = u(rng) < 0.5 ? CombineMode::product : CombineMode::replace;
  for (std::size_t f = 0; f < n_features; ++f) model.features->intern("f:" + std::to_string(f));
  const std::size_t stages = s_dist(rng);
  for (std::size_t s = 0; s < stages; ++s) {
    auto table = std::make_shared<TableClassifier>(m);
    auto row = [&] {
      std::vector<double> w(m);
      for (double& x : w) x = u(rng) < 0.3 ? 0.0 : u(rng);
      return w;
    };
    table->set_default(row());
    for (FeatureId f = 0; f < n_features; ++f)
      if (u(rng) < 0.5) table->set_row(f, row());
    model.stages.push_back(Stage{"s" + std::to_string(s), table, 0.5 * u(rng), "all"});
  }
  return model;
}

inline SparseExample random_input(std::mt19937_64& rng, std::size_t n_features = 6) {
  std::vector<FeatureId> ids;
  std::bernoulli_distribution on(0.4);
  for (FeatureId f = 0; f < n_features; ++f)
    if (on(rng)) ids.push_back(f);
  return SparseExample::from(std::move(ids));
}

struct MonotonicityReport {
  std::size_t cases = 0;
  std::size_t subset_violations = 0;
  std::size_t empty_sets = 0;
  std::size_t zero_mass_violations = 0;
  std::size_t normalization_violations = 0;
  std::size_t degenerate = 0;  // predictions that raised (must stay 0)
};

/// Checks C_i subset of C_{i-1}, non-emptiness, zero mass outside the
/// incoming set and normalization on random models and inputs.
inline MonotonicityReport monotonicity_fuzz(std::uint64_t seed, std::size_t cases) {
  std::mt19937_64 rng(seed);
  MonotonicityReport r;
  for (std::size_t i = 0; i < cases; ++i) {
    SequentialModel model = random_table_model(rng);
    SparseExample x = random_input(rng);
    ++r.cases;
    PredictionTrace trace;
    try {
      trace = sm_predict(model, x);
    } catch (const Error&) {
      ++r.degenerate;
      continue;
    }
    ConfusionSet prev = ConfusionSet::full(model.alphabet.size());
    for (const auto& st : trace.stages) {
      r.subset_violations += !(st.input == prev) || !st.output.subset_of(st.input);
      r.empty_sets += st.output.size() == 0;
      for (std::size_t c = 0; c < st.emitted.size(); ++c)
        r.zero_mass_violations += st.emitted.probs()[c] > 0.0 && !st.input.contains(static_cast<LabelId>(c));
      r.normalization_violations += !st.emitted.normalized();
      prev = st.output;
    }
    r.normalization_violations += !trace.final_distribution.normalized();
    r.subset_violations += !prev.contains(trace.label);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Verification suite

struct CheckResult {
  std::string name;
  std::uint64_t seed = 0;
  bool passed = false;
  std::string numerics;  // space-separated key=value pairs
  double seconds = 0.0;
};

inline std::string format_check(const CheckResult& c) {
  std::ostringstream os;
  os << "check=" << c.name << " seed=" << c.seed << " result=" << (c.passed ? "pass" : "fail") << ' ' << c.numerics
     << " seconds=" << std::setprecision(3) << c.seconds;
  return os.str();
}

namespace detail {

template <class F>
CheckResult timed(std::string name, std::uint64_t seed, F&& body) {
  auto start = std::chrono::steady_clock::now();
  CheckResult r{std::move(name), seed, false, {}, 0.0};
  body(r);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

/// m in [2,5], N in [1,3], arities in [2,16]: at most 4096 joint inputs.
inline SyntheticSpec small_spec(std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> m(2, 5), n(1, 3);
  return random_spec(rng, m(rng), n(rng), 16);
}

}  // namespace detail

/// Product rule versus joint posterior on `specs` random specs.
inline CheckResult verify_product_rule(std::uint64_t seed, std::size_t specs = 100) {
  return detail::timed("product_rule", seed, [&](CheckResult& r) {
    std::mt19937_64 rng(seed);
    std::size_t inputs = 0, mismatches = 0, max_domain = 0;
    for (std::size_t i = 0; i < specs; ++i) {
      SyntheticSpec spec = detail::small_spec(rng);
      auto domain = spec.domain();
      max_domain = std::max(max_domain, domain.size());
      for (std::size_t xi = 0; xi < domain.size(); ++xi) {
        auto x = domain.decode(xi);
        ++inputs;
        mismatches += product_rule_argmax(spec, x) != joint_posterior_argmax(spec, x);
      }
    }
    r.passed = mismatches == 0;
    r.numerics = "specs=" + std::to_string(specs) + " inputs=" + std::to_string(inputs) +
                 " mismatches=" + std::to_string(mismatches) + " max_domain=" + std::to_string(max_domain);
  });
}

/// The same equivalence realized as a sequential model of table stages.
inline CheckResult verify_sm_equivalence(std::uint64_t seed, std::size_t specs = 100) {
  return detail::timed("sm_equivalence", seed, [&](CheckResult& r) {
    std::mt19937_64 rng(seed);
    std::size_t inputs = 0, mismatches = 0;
    for (std::size_t i = 0; i < specs; ++i) {
      auto rep = sm_equivalence_check(detail::small_spec(rng));
      inputs += rep.inputs;
      mismatches += rep.mismatches;
    }
    r.passed = mismatches == 0;
    r.numerics = "specs=" + std::to_string(specs) + " inputs=" + std::to_string(inputs) +
                 " mismatches=" + std::to_string(mismatches);
  });
}

/// Dependent blocks must break the equivalence; the check passes when they do.
inline CheckResult verify_negative_control(std::uint64_t seed) {
  return detail::timed("ci_negative_control", seed, [&](CheckResult& r) {
    auto rep = sm_equivalence_check(xor_dependent_joint());
    r.passed = rep.mismatches > 0;
    r.numerics = "inputs=" + std::to_string(rep.inputs) + " mismatches=" + std::to_string(rep.mismatches);
  });
}

struct NestedInstance {
  SyntheticSpec spec;
  std::vector<LabelId> k_set, k_prime;
  std::vector<LabelId> target;
};

/// |K| in [1,4], r in [1,3], m = |K| + r (+1 spare label half the time).
inline NestedInstance random_nested_instance(std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> k_dist(1, 4), r_dist(1, 3), n_dist(1, 3), spare(0, 1);
  std::size_t k = k_dist(rng), r = r_dist(rng);
  std::size_t m = k + r + spare(rng);
  NestedInstance inst;
  inst.spec = random_spec(rng, m, n_dist(rng), 6);
  std::vector<LabelId> labels(m);
  for (std::size_t c = 0; c < m; ++c) labels[c] = static_cast<LabelId>(c);
  std::shuffle(labels.begin(), labels.end(), rng);
  inst.k_set.assign(labels.begin(), labels.begin() + static_cast<std::ptrdiff_t>(k));
  inst.k_prime.assign(labels.begin(), labels.begin() + static_cast<std::ptrdiff_t>(k + r));
  std::sort(inst.k_set.begin(), inst.k_set.end());
  std::sort(inst.k_prime.begin(), inst.k_prime.end());
  inst.target = sample_targets(inst.spec, inst.k_set, rng);
  return inst;
}

inline CheckResult verify_nested_sets(std::uint64_t seed, std::size_t instances = 200) {
  return detail::timed("nested_set_error", seed, [&](CheckResult& r) {
    std::mt19937_64 rng(seed);
    std::size_t violations = 0;
    double worst_gap = 0.0, min_margin = 1.0;
    for (std::size_t i = 0; i < instances; ++i) {
      auto inst = random_nested_instance(rng);
      auto rep = claim1_check(inst.spec, inst.k_set, inst.k_prime, inst.target);
      violations += !rep.inequality_holds;
      worst_gap = std::max(worst_gap, std::abs(rep.identity_gap));
      min_margin = std::min(min_margin, rep.error_k_prime - rep.error_k);
    }
    r.passed = violations == 0 && worst_gap <= 1e-12;
    std::ostringstream os;
    os << "instances=" << instances << " violations=" << violations << " max_identity_gap=" << worst_gap
       << " min_error_increase=" << min_margin;
    r.numerics = os.str();
  });
}

/// A filter that loses the true label with probability below
/// (1 - Error_K) * pe never pushes the error past Error_K'.
inline CheckResult verify_relaxed_bound(std::uint64_t seed, std::size_t instances = 200) {
  return detail::timed("relaxed_filter_bound", seed, [&](CheckResult& r) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> frac(0.0, 1.0);
    std::size_t violations = 0;
    double worst = -1.0;
    for (std::size_t i = 0; i < instances; ++i) {
      auto inst = random_nested_instance(rng);
      auto rep = claim1_check(inst.spec, inst.k_set, inst.k_prime, inst.target);
      double drop = frac(rng) * rep.residual;
      // enumerate: a dropped label is an error, otherwise the argmax over K decides
      auto domain = inst.spec.domain();
      double err = 0.0;
      for (std::size_t xi = 0; xi < domain.size(); ++xi) {
        auto scores = inst.spec.joint_scores(domain.decode(xi));
        double px = std::accumulate(scores.begin(), scores.end(), 0.0);
        bool wrong = set_argmax(scores, inst.k_set) != inst.target[xi];
        err += px * (drop + (1.0 - drop) * (wrong ? 1.0 : 0.0));
      }
      worst = std::max(worst, err - rep.error_k_prime);
      violations += err > rep.error_k_prime + 1e-12;
    }
    r.passed = violations == 0;
    std::ostringstream os;
    os << "instances=" << instances << " violations=" << violations << " max_excess=" << worst;
    r.numerics = os.str();
  });
}

/// Per seed, h' (trained without c3) has the lower empirical loss on S1 u S2;
/// averaged over seeds it is no worse on fresh c1-vs-c2 data.
inline CheckResult verify_restricted_training(std::uint64_t seed, std::size_t seeds = 50) {
  return detail::timed("restricted_training", seed, [&](CheckResult& r) {
    std::size_t train_violations = 0;
    double test_restricted = 0.0, test_full = 0.0;
    for (std::size_t i = 0; i < seeds; ++i) {
      auto rep = claim2_check(seed * 1000 + i, ThirdClass::random);
      train_violations += rep.train_loss_restricted > rep.train_loss_full + 1e-12;
      test_restricted += rep.test_loss_restricted / static_cast<double>(seeds);
      test_full += rep.test_loss_full / static_cast<double>(seeds);
    }
    auto empty = claim2_check(seed, ThirdClass::empty);
    auto adversarial = claim2_check(seed, ThirdClass::adversarial);
    bool empty_equal = std::abs(empty.test_loss_restricted - empty.test_loss_full) <= 1e-12;
    bool adversarial_worse = adversarial.test_loss_full > adversarial.test_loss_restricted;
    r.passed = train_violations == 0 && test_restricted <= test_full + 1e-3 && empty_equal && adversarial_worse;
    std::ostringstream os;
    os << "seeds=" << seeds << " train_violations=" << train_violations << " mean_test_loss_restricted="
       << test_restricted << " mean_test_loss_full=" << test_full << " empty_equal=" << empty_equal
       << " adversarial_loss_restricted=" << adversarial.test_loss_restricted
       << " adversarial_loss_full=" << adversarial.test_loss_full;
    r.numerics = os.str();
  });
}

/// Random trees with 1..15 internal nodes over 1..10 bits.
inline CheckResult verify_dt_to_sm(std::uint64_t seed, std::size_t trees = 100) {
  return detail::timed("dt_to_sm", seed, [&](CheckResult& r) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> internal(1, 15), n_labels(1, 6);
    std::uniform_int_distribution<std::uint32_t> bits(1, 10);
    std::size_t inputs = 0, mismatches = 0, size_mismatches = 0;
    for (std::size_t i = 0; i < trees; ++i) {
      std::vector<std::string> labels;
      for (std::size_t c = 0, n = n_labels(rng); c < n; ++c) labels.push_back("L" + std::to_string(c));
      std::uint32_t b = bits(rng);
      auto tree = random_tree(rng, internal(rng), b, labels);
      auto rep = dt_equivalence_check(tree, dt_to_sm(tree), b);
      inputs += rep.inputs;
      mismatches += rep.mismatches;
      size_mismatches += rep.stages != rep.internal_nodes;
    }
    r.passed = mismatches == 0 && size_mismatches == 0;
    r.numerics = "trees=" + std::to_string(trees) + " inputs=" + std::to_string(inputs) +
                 " mismatches=" + std::to_string(mismatches) + " size_mismatches=" + std::to_string(size_mismatches);
  });
}

inline CheckResult verify_monotonicity(std::uint64_t seed, std::size_t cases = 10000) {
  return detail::timed("monotonicity", seed, [&](CheckResult& r) {
    auto rep = monotonicity_fuzz(seed, cases);
    r.passed = rep.subset_violations == 0 && rep.empty_sets == 0 && rep.zero_mass_violations == 0 &&
               rep.normalization_violations == 0 && rep.degenerate == 0;
    r.numerics = "cases=" + std::to_string(rep.cases) + " subset_violations=" + std::to_string(rep.subset_violations) +
                 " empty_sets=" + std::to_string(rep.empty_sets) +
                 " zero_mass_violations=" + std::to_string(rep.zero_mass_violations) +
                 " normalization_violations=" + std::to_string(rep.normalization_violations) +
                 " errors=" + std::to_string(rep.degenerate);
  });
}

/// Every check, in a fixed order.
inline std::vector<CheckResult> run_verification(std::uint64_t seed) {
  return {verify_product_rule(seed),     verify_sm_equivalence(seed),    verify_negative_control(seed),
          verify_nested_sets(seed),      verify_relaxed_bound(seed),     verify_restricted_training(seed),
          verify_dt_to_sm(seed),         verify_monotonicity(seed)};
}

}  // namespace seqm::theory
