// Binary decision trees over input bits and their conversion into an
// equivalent sequential model with one stage per internal node.
#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <map>
#include <memory>
#include <ostream>
#include <queue>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "seqmodel/core.hpp"
#include "seqmodel/text_format.hpp"

namespace seqm {

/// Child slot of an internal node: either another internal node or a leaf.
struct TreeChild {
  bool leaf = true;
  int node = -1;
  std::string label;

  bool operator==(const TreeChild&) const = default;
};

/// Internal node. The left child is taken when the queried bit is 0.
struct TreeNode {
  int id = 0;
  std::uint32_t query = 0;
  TreeChild left;
  TreeChild right;

  bool operator==(const TreeNode&) const = default;
};

class BinaryDecisionTree {
 public:
  BinaryDecisionTree() = default;

  /// Validates shape: unique ids, every child reference resolves, exactly one
  /// root, no node referenced twice (so the structure is a finite tree).
  explicit BinaryDecisionTree(std::vector<TreeNode> nodes) : nodes_(std::move(nodes)) {
    if (nodes_.empty()) throw InvalidInput("decision tree has no internal nodes");
    for (std::size_t i = 0; i < nodes_.size(); ++i)
      if (!index_.emplace(nodes_[i].id, i).second)
        throw InvalidInput("duplicate node id " + std::to_string(nodes_[i].id));

    std::map<int, int> referenced;
    for (const auto& n : nodes_) {
      for (const TreeChild* ch : {&n.left, &n.right}) {
        if (ch->leaf) {
          if (ch->label.empty()) throw InvalidInput("leaf without label under node " + std::to_string(n.id));
          continue;
        }
        if (!index_.count(ch->node)) throw InvalidInput("node " + std::to_string(n.id) + " references missing node " +
                                                        std::to_string(ch->node));
        if (++referenced[ch->node] > 1) throw InvalidInput("node " + std::to_string(ch->node) + " has two parents");
      }
    }
    std::vector<int> roots;
    for (const auto& n : nodes_)
      if (!referenced.count(n.id)) roots.push_back(n.id);
    if (roots.size() != 1) throw InvalidInput("decision tree must have exactly one root");
    root_ = roots.front();

    // Reachability from the root also rules out cycles among non-root nodes.
    std::size_t seen = 0;
    std::vector<int> stack{root_};
    while (!stack.empty()) {
      int id = stack.back();
      stack.pop_back();
      if (++seen > nodes_.size()) throw InvalidInput("decision tree contains a cycle");
      const auto& n = node(id);
      if (!n.left.leaf) stack.push_back(n.left.node);
      if (!n.right.leaf) stack.push_back(n.right.node);
    }
    if (seen != nodes_.size()) throw InvalidInput("decision tree has unreachable nodes");
  }

  const std::vector<TreeNode>& nodes() const noexcept { return nodes_; }
  std::size_t internal_count() const noexcept { return nodes_.size(); }
  int root() const noexcept { return root_; }
  const TreeNode& node(int id) const { return nodes_.at(index_.at(id)); }

  std::uint32_t bit_width() const {
    std::uint32_t w = 0;
    for (const auto& n : nodes_) w = std::max(w, n.query + 1);
    return w;
  }

  std::vector<std::string> labels() const {
    std::set<std::string> s;
    for (const auto& n : nodes_)
      for (const TreeChild* ch : {&n.left, &n.right})
        if (ch->leaf) s.insert(ch->label);
    return {s.begin(), s.end()};
  }

  /// Labels of the leaves under a child slot.
  std::set<std::string> labels_under(const TreeChild& child) const {
    std::set<std::string> out;
    std::vector<const TreeChild*> stack{&child};
    while (!stack.empty()) {
      const TreeChild* ch = stack.back();
      stack.pop_back();
      if (ch->leaf) {
        out.insert(ch->label);
      } else {
        const auto& n = node(ch->node);
        stack.push_back(&n.left);
        stack.push_back(&n.right);
      }
    }
    return out;
  }

  const std::string& predict(const std::vector<bool>& bits) const {
    const TreeNode* n = &node(root_);
    for (;;) {
      bool bit = n->query < bits.size() && bits[n->query];
      const TreeChild& ch = bit ? n->right : n->left;
      if (ch.leaf) return ch.label;
      n = &node(ch.node);
    }
  }

 private:
  std::vector<TreeNode> nodes_;
  std::map<int, std::size_t> index_;
  int root_ = 0;
};

// ---------------------------------------------------------------------------
// Tree text format: one line per internal node,
//   node <id> query=<bit> left=<id|leaf:TAG> right=<id|leaf:TAG>
// Blank lines and lines starting with '#' are ignored.

inline BinaryDecisionTree read_tree(std::istream& in, const std::string& source = "<tree>") {
  text::LineReader reader(in, source);
  std::vector<TreeNode> nodes;
  auto child = [&](std::string_view tok, std::string_view key) {
    if (tok.substr(0, key.size()) != key) reader.fail("expected " + std::string(key));
    tok.remove_prefix(key.size());
    TreeChild ch;
    if (tok.substr(0, 5) == "leaf:") {
      ch.label = text::unescape(tok.substr(5));
      if (ch.label.empty()) reader.fail("empty leaf label");
    } else {
      ch.leaf = false;
      ch.node = reader.integer<int>(tok);
    }
    return ch;
  };
  while (auto line = reader.next()) {
    auto toks = text::split_ws(*line);
    if (toks.empty() || toks[0].front() == '#') continue;
    if (toks.size() != 5 || toks[0] != "node") reader.fail("expected 'node <id> query=<bit> left=... right=...'");
    TreeNode n;
    n.id = reader.integer<int>(toks[1]);
    if (toks[2].substr(0, 6) != "query=") reader.fail("expected query=<bit>");
    n.query = reader.integer<std::uint32_t>(toks[2].substr(6));
    n.left = child(toks[3], "left=");
    n.right = child(toks[4], "right=");
    nodes.push_back(std::move(n));
  }
  try {
    return BinaryDecisionTree(std::move(nodes));
  } catch (const InvalidInput& e) {
    throw ParseError(source, reader.line(), e.what());
  }
}

inline void write_tree(std::ostream& os, const BinaryDecisionTree& tree) {
  auto child = [](const TreeChild& ch) {
    return ch.leaf ? "leaf:" + text::escape(ch.label) : std::to_string(ch.node);
  };
  for (const auto& n : tree.nodes())
    os << "node " << n.id << " query=" << n.query << " left=" << child(n.left) << " right=" << child(n.right)
       << '\n';
}

/// Random tree with exactly `internal` internal nodes grown by splitting
/// random leaves; queries and leaf labels drawn uniformly.
inline BinaryDecisionTree random_tree(std::mt19937_64& rng, std::size_t internal, std::uint32_t bits,
                                      const std::vector<std::string>& labels) {
  if (internal == 0 || bits == 0 || labels.empty()) throw InvalidInput("random_tree: bad parameters");
  std::uniform_int_distribution<std::uint32_t> bit(0, bits - 1);
  std::uniform_int_distribution<std::size_t> lab(0, labels.size() - 1);
  auto leaf = [&] { return TreeChild{true, -1, labels[lab(rng)]}; };

  std::vector<TreeNode> nodes;
  nodes.push_back(TreeNode{0, bit(rng), leaf(), leaf()});
  while (nodes.size() < internal) {
    std::vector<std::pair<std::size_t, bool>> open;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (nodes[i].left.leaf) open.emplace_back(i, false);
      if (nodes[i].right.leaf) open.emplace_back(i, true);
    }
    auto [at, right] = open[std::uniform_int_distribution<std::size_t>(0, open.size() - 1)(rng)];
    int id = static_cast<int>(nodes.size());
    TreeChild& slot = right ? nodes[at].right : nodes[at].left;
    slot = TreeChild{false, id, {}};
    nodes.push_back(TreeNode{id, bit(rng), leaf(), leaf()});
  }
  return BinaryDecisionTree(std::move(nodes));
}

// ---------------------------------------------------------------------------
// Decision-node stage classifier

/// Stage for one internal node d. It is active iff the input satisfies every
/// test on the path from the root to d; then it keeps the labels reachable
/// through the chosen child. Otherwise it passes the incoming set through.
class DecisionNodeClassifier final : public StageClassifier {
 public:
  struct PathTest {
    FeatureId bit;
    bool value;
    bool operator==(const PathTest&) const = default;
  };

  DecisionNodeClassifier(std::size_t m, FeatureId query, std::vector<PathTest> path, ConfusionSet left,
                         ConfusionSet right)
      : m_(m), query_(query), path_(std::move(path)), left_(std::move(left)), right_(std::move(right)) {}

  std::string_view kind() const override { return "dt-node"; }

  bool active(const SparseExample& x) const {
    return std::all_of(path_.begin(), path_.end(), [&](const PathTest& t) { return x.has(t.bit) == t.value; });
  }

  LabelDistribution predict(const SparseExample& x, const ConfusionSet& cs) const override {
    if (!active(x)) return LabelDistribution::uniform(m_, cs);
    const ConfusionSet& chosen = x.has(query_) ? right_ : left_;
    std::vector<LabelId> keep;
    for (LabelId c : chosen)
      if (cs.contains(c)) keep.push_back(c);
    if (keep.empty()) throw InvalidInput("decision node: chosen subtree labels were already filtered out");
    return LabelDistribution::uniform(m_, ConfusionSet(std::move(keep)));
  }

  void write_payload(std::ostream& os, const FeatureSpace& space, const LabelAlphabet& alphabet) const override {
    auto labels = [&](const char* key, const ConfusionSet& s) {
      os << key << ' ' << s.size();
      for (LabelId c : s) os << ' ' << text::escape(alphabet.name(c));
      os << '\n';
    };
    os << "labels " << m_ << '\n';
    os << "query " << text::escape(space.name(query_)) << '\n';
    os << "path " << path_.size();
    for (const auto& t : path_) os << ' ' << text::escape(space.name(t.bit)) << '=' << (t.value ? 1 : 0);
    os << '\n';
    labels("left", left_);
    labels("right", right_);
  }

  bool equals(const StageClassifier& other) const override {
    auto* o = dynamic_cast<const DecisionNodeClassifier*>(&other);
    return o && o->m_ == m_ && o->query_ == query_ && o->path_ == path_ && o->left_ == left_ &&
           o->right_ == right_;
  }

  FeatureId query() const noexcept { return query_; }
  const std::vector<PathTest>& path() const noexcept { return path_; }

 private:
  std::size_t m_;
  FeatureId query_;
  std::vector<PathTest> path_;
  ConfusionSet left_;
  ConfusionSet right_;
};

inline std::string bit_feature(std::uint32_t bit) { return "bit:" + std::to_string(bit); }

/// Input bits as a sparse example over the model's `bit:<k>` features.
inline SparseExample bits_example(const std::vector<bool>& bits, const FeatureSpace& space) {
  std::vector<FeatureId> ids;
  for (std::uint32_t k = 0; k < bits.size(); ++k)
    if (bits[k])
      if (auto id = space.find(bit_feature(k))) ids.push_back(*id);
  return SparseExample::from(std::move(ids));
}

/// Label used to pad the alphabet of a tree whose leaves all agree.
inline constexpr const char* kUnusedLabel = "<unused>";

/// One stage per internal node, ordered so that a node precedes its children
/// (smallest available id first). Thresholds are 0 and stages combine by
/// product; the final surviving set is the reached leaf's label.
inline SequentialModel dt_to_sm(const BinaryDecisionTree& tree) {
  auto names = tree.labels();
  if (names.size() < 2) names.push_back(kUnusedLabel);
  std::sort(names.begin(), names.end());

  SequentialModel model;
  model.alphabet = LabelAlphabet(names);
  model.combine = CombineMode::product;
  for (std::uint32_t k = 0; k < tree.bit_width(); ++k) model.features->intern(bit_feature(k));

  auto label_set = [&](const TreeChild& ch) {
    std::vector<LabelId> ids;
    for (const auto& l : tree.labels_under(ch)) ids.push_back(model.alphabet.id(l));
    return ConfusionSet(std::move(ids));
  };

  // Path tests from the root to every node.
  std::map<int, std::vector<DecisionNodeClassifier::PathTest>> paths;
  paths[tree.root()] = {};
  std::priority_queue<int, std::vector<int>, std::greater<>> ready;
  ready.push(tree.root());
  while (!ready.empty()) {
    int id = ready.top();
    ready.pop();
    const TreeNode& n = tree.node(id);
    FeatureId q = *model.features->find(bit_feature(n.query));
    const auto& path = paths[id];

    auto cls = std::make_shared<DecisionNodeClassifier>(model.alphabet.size(), q, path, label_set(n.left),
                                                        label_set(n.right));
    model.stages.push_back(Stage{"n" + std::to_string(id), std::move(cls), 0.0, "all"});

    for (bool right : {false, true}) {
      const TreeChild& ch = right ? n.right : n.left;
      if (ch.leaf) continue;
      auto child_path = path;
      child_path.push_back({q, right});
      paths[ch.node] = std::move(child_path);
      ready.push(ch.node);
    }
  }
  return model;
}

}  // namespace seqm
