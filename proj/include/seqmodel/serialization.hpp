// SMV1 model files.
//
//   SMV1
//   alphabet <m> <label>...
//   combine <product|replace>
//   features <n>              followed by n feature names in id order
//   views <k>                 followed by k lines: view <name> <group>...
//   stages <s>                followed by s lines:
//     stage <i> kind=<kind> eps=<e> view=<view> payload=<name>
//   payloads <p>
//   payload <name> <kind>     p blocks, each closed by 'end'
//   END
//
// Names are escaped (see text::escape); reals use 17 significant digits so a
// write/read cycle reproduces every double exactly.
#pragma once

#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <memory>
#include <ostream>
#include <set>
#include <sstream>
#include <string>

#include "seqmodel/core.hpp"
#include "seqmodel/decision_tree.hpp"
#include "seqmodel/learners.hpp"
#include "seqmodel/text_format.hpp"

namespace seqm {

inline constexpr std::string_view kModelMagic = "SMV1";

// ---------------------------------------------------------------------------
// Writing

using PayloadMap = std::map<std::string, std::shared_ptr<const StageClassifier>>;

/// `extra` holds named classifiers stored alongside the stage payloads
/// without being part of the pipeline.
inline void write_model_body(std::ostream& os, const SequentialModel& model, const PayloadMap& extra = {}) {
  if (auto problems = sm_validate(model); !problems.empty())
    throw InvalidInput("refusing to write invalid model: " + problems.front());

  os << "alphabet " << model.alphabet.size();
  for (const auto& n : model.alphabet.names()) os << ' ' << text::escape(n);
  os << '\n';
  os << "combine " << to_string(model.combine) << '\n';
  os << "features " << model.features->size() << '\n';
  for (FeatureId f = 0; f < model.features->size(); ++f) os << text::escape(model.features->name(f)) << '\n';
  os << "views " << model.views.size() << '\n';
  for (const auto& [name, view] : model.views) {
    os << "view " << text::escape(name);
    for (const auto& g : view.groups) os << ' ' << text::escape(g);
    os << '\n';
  }
  os << "stages " << model.stages.size() << '\n';
  for (std::size_t i = 0; i < model.stages.size(); ++i) {
    const auto& s = model.stages[i];
    os << "stage " << i << " kind=" << s.classifier->kind() << " eps=" << text::format_double(s.epsilon)
       << " view=" << text::escape(s.view) << " payload=" << text::escape(s.name) << '\n';
  }
  PayloadMap all;
  for (const auto& s : model.stages) all.emplace(s.name, s.classifier);
  for (const auto& [name, cls] : extra)
    if (!all.emplace(name, cls).second && all[name] != cls)
      throw InvalidInput("payload name '" + name + "' is used by two classifiers");
  os << "payloads " << all.size() << '\n';
  for (const auto& [name, cls] : all) {
    os << "payload " << text::escape(name) << ' ' << cls->kind() << '\n';
    cls->write_payload(os, *model.features, model.alphabet);
    os << "end\n";
  }
}

inline void write_model(std::ostream& os, const SequentialModel& model) {
  os << kModelMagic << '\n';
  write_model_body(os, model);
  os << "END\n";
}

inline std::string serialize_model(const SequentialModel& model) {
  std::ostringstream os;
  write_model(os, model);
  return os.str();
}

// ---------------------------------------------------------------------------
// Reading

namespace detail {

struct PayloadContext {
  text::LineReader& reader;
  const LabelAlphabet& alphabet;
  const std::shared_ptr<FeatureSpace>& space;

  FeatureId feature(std::string_view tok) const {
    auto id = space->find(text::unescape(tok));
    if (!id) reader.fail("unknown feature '" + std::string(tok) + "'");
    return *id;
  }

  LabelId label(std::string_view tok) const {
    auto id = alphabet.find(text::unescape(tok));
    if (!id) reader.fail("unknown label '" + std::string(tok) + "'");
    return *id;
  }

  std::vector<std::string_view> keyed(const std::string& line, std::string_view key, std::size_t min_tokens) const {
    auto toks = text::split_ws(line);
    if (toks.size() < min_tokens || toks[0] != key) reader.fail("expected '" + std::string(key) + "'");
    return toks;
  }

  std::size_t count_line(std::string_view key) {
    std::string line = reader.expect(key);
    auto toks = keyed(line, key, 2);
    return reader.integer<std::size_t>(toks[1]);
  }
};

inline std::map<std::string, std::string> key_values(const text::LineReader& reader,
                                                     const std::vector<std::string_view>& toks, std::size_t from) {
  std::map<std::string, std::string> kv;
  for (std::size_t i = from; i < toks.size(); ++i) {
    auto eq = toks[i].find('=');
    if (eq == std::string_view::npos) reader.fail("expected key=value, got '" + std::string(toks[i]) + "'");
    kv[std::string(toks[i].substr(0, eq))] = std::string(toks[i].substr(eq + 1));
  }
  return kv;
}

inline std::shared_ptr<StageClassifier> read_snow(PayloadContext& ctx) {
  auto& r = ctx.reader;
  std::string line = r.expect("params");
  auto kv = key_values(r, ctx.keyed(line, "params", 1), 1);
  auto get = [&](const char* k) {
    auto it = kv.find(k);
    if (it == kv.end()) r.fail(std::string("missing snow parameter ") + k);
    return it->second;
  };
  WinnowParams p;
  p.promotion = r.number(get("promotion"));
  p.demotion = r.number(get("demotion"));
  p.threshold = r.number(get("threshold"));
  p.initial_weight = r.number(get("initial_weight"));
  p.temperature = r.number(get("temperature"));
  p.max_epochs = r.integer<int>(get("max_epochs"));
  p.demote_all = r.integer<int>(get("demote_all")) != 0;
  std::shared_ptr<SnowNetwork> net;
  try {
    net = std::make_shared<SnowNetwork>(ctx.alphabet, p, ctx.space);
  } catch (const InvalidInput& e) {
    r.fail(e.what());
  }
  std::size_t n = ctx.count_line("nodes");
  if (n != ctx.alphabet.size()) r.fail("snow payload must have one node per label");
  for (std::size_t i = 0; i < n; ++i) {
    std::string head = r.expect("node");
    auto toks = ctx.keyed(head, "node", 3);
    LabelId label = ctx.label(toks[1]);
    auto links = r.integer<std::size_t>(toks[2]);
    auto& node = net->nodes()[label];
    for (std::size_t k = 0; k < links; ++k) {
      std::string row = r.expect("feature weight");
      auto rt = text::split_ws(row);
      if (rt.size() != 2) r.fail("expected '<feature> <weight>'");
      double w = r.number(rt[1]);
      if (!(w > 0.0)) r.fail("winnow weights must be positive");
      node.weights[ctx.feature(rt[0])] = w;
    }
  }
  return net;
}

inline std::shared_ptr<StageClassifier> read_count(PayloadContext& ctx) {
  auto& r = ctx.reader;
  auto min_support = ctx.count_line("min_support");
  std::shared_ptr<CountClassifier> cc;
  try {
    cc = std::make_shared<CountClassifier>(ctx.alphabet, min_support);
  } catch (const InvalidInput& e) {
    r.fail(e.what());
  }
  std::size_t rows = ctx.count_line("rows");
  for (std::size_t i = 0; i < rows; ++i) {
    std::string line = r.expect("count row");
    auto toks = text::split_ws(line);
    if (toks.size() < 2) r.fail("expected '<feature> <k> <label>:<count>...'");
    FeatureId f = ctx.feature(toks[0]);
    auto k = r.integer<std::size_t>(toks[1]);
    if (toks.size() != k + 2) r.fail("count row has wrong number of entries");
    for (std::size_t j = 0; j < k; ++j) {
      auto colon = toks[j + 2].rfind(':');
      if (colon == std::string_view::npos) r.fail("expected <label>:<count>");
      cc->train(f, ctx.label(toks[j + 2].substr(0, colon)),
                r.integer<std::uint64_t>(toks[j + 2].substr(colon + 1)));
    }
  }
  return cc;
}

inline std::shared_ptr<StageClassifier> read_table(PayloadContext& ctx) {
  auto& r = ctx.reader;
  std::size_t m = ctx.count_line("labels");
  if (m != ctx.alphabet.size()) r.fail("table width does not match alphabet");
  auto table = std::make_shared<TableClassifier>(m);
  auto numbers = [&](const std::vector<std::string_view>& toks, std::size_t from) {
    if (toks.size() != from + m) r.fail("table row has wrong width");
    std::vector<double> w;
    for (std::size_t i = from; i < toks.size(); ++i) w.push_back(r.number(toks[i]));
    return w;
  };
  std::string line = r.expect("default");
  auto toks = ctx.keyed(line, "default", 2);
  if (!(toks.size() == 2 && toks[1] == "none")) table->set_default(numbers(toks, 1));
  std::size_t rows = ctx.count_line("rows");
  for (std::size_t i = 0; i < rows; ++i) {
    std::string row = r.expect("table row");
    auto rt = text::split_ws(row);
    if (rt.empty()) r.fail("empty table row");
    table->set_row(ctx.feature(rt[0]), numbers(rt, 1));
  }
  return table;
}

inline std::shared_ptr<StageClassifier> read_dt_node(PayloadContext& ctx) {
  auto& r = ctx.reader;
  std::size_t m = ctx.count_line("labels");
  if (m != ctx.alphabet.size()) r.fail("dt-node width does not match alphabet");
  std::string qline = r.expect("query");
  FeatureId query = ctx.feature(ctx.keyed(qline, "query", 2)[1]);
  std::string pline = r.expect("path");
  auto pt = ctx.keyed(pline, "path", 2);
  auto k = r.integer<std::size_t>(pt[1]);
  if (pt.size() != k + 2) r.fail("path has wrong number of tests");
  std::vector<DecisionNodeClassifier::PathTest> path;
  for (std::size_t i = 0; i < k; ++i) {
    auto eq = pt[i + 2].rfind('=');
    if (eq == std::string_view::npos) r.fail("expected <feature>=<0|1>");
    auto v = pt[i + 2].substr(eq + 1);
    if (v != "0" && v != "1") r.fail("path test value must be 0 or 1");
    path.push_back({ctx.feature(pt[i + 2].substr(0, eq)), v == "1"});
  }
  auto labels = [&](const char* key) {
    std::string line = r.expect(key);
    auto toks = ctx.keyed(line, key, 2);
    auto n = r.integer<std::size_t>(toks[1]);
    if (toks.size() != n + 2 || n == 0) r.fail(std::string("malformed ") + key + " label set");
    std::vector<LabelId> ids;
    for (std::size_t i = 0; i < n; ++i) ids.push_back(ctx.label(toks[i + 2]));
    return ConfusionSet(std::move(ids));
  };
  auto left = labels("left");
  auto right = labels("right");
  return std::make_shared<DecisionNodeClassifier>(m, query, std::move(path), std::move(left), std::move(right));
}

}  // namespace detail

/// Reads everything after the SMV1 header up to (not including) END.
inline SequentialModel read_model_body(text::LineReader& r, PayloadMap* payloads_out = nullptr) {
  SequentialModel model;

  std::string line = r.expect("alphabet");
  auto toks = text::split_ws(line);
  if (toks.size() < 2 || toks[0] != "alphabet") r.fail("expected 'alphabet <m> <labels...>'");
  auto m = r.integer<std::size_t>(toks[1]);
  if (toks.size() != m + 2) r.fail("alphabet line has wrong number of labels");
  std::vector<std::string> names;
  for (std::size_t i = 0; i < m; ++i) names.push_back(text::unescape(toks[i + 2]));
  try {
    model.alphabet = LabelAlphabet(std::move(names));
  } catch (const InvalidInput& e) {
    r.fail(e.what());
  }

  line = r.expect("combine");
  toks = text::split_ws(line);
  if (toks.size() != 2 || toks[0] != "combine") r.fail("expected 'combine <mode>'");
  try {
    model.combine = parse_combine_mode(toks[1]);
  } catch (const InvalidInput& e) {
    r.fail(e.what());
  }

  detail::PayloadContext ctx{r, model.alphabet, model.features};
  std::size_t nfeat = ctx.count_line("features");
  for (std::size_t i = 0; i < nfeat; ++i) {
    std::string name = text::unescape(r.expect("feature name"));
    if (model.features->intern(name) != i) r.fail("duplicate feature name");
  }

  std::size_t nviews = ctx.count_line("views");
  for (std::size_t i = 0; i < nviews; ++i) {
    line = r.expect("view");
    toks = ctx.keyed(line, "view", 2);
    FeatureView view{text::unescape(toks[1]), {}};
    for (std::size_t k = 2; k < toks.size(); ++k) view.groups.push_back(text::unescape(toks[k]));
    model.add_view(std::move(view));
  }

  struct PendingStage {
    std::string kind;
    Stage stage;
  };
  std::vector<PendingStage> pending;
  std::size_t nstages = ctx.count_line("stages");
  for (std::size_t i = 0; i < nstages; ++i) {
    line = r.expect("stage");
    toks = ctx.keyed(line, "stage", 2);
    if (r.integer<std::size_t>(toks[1]) != i) r.fail("stages out of order");
    auto kv = detail::key_values(r, toks, 2);
    for (const char* k : {"kind", "eps", "view", "payload"})
      if (!kv.count(k)) r.fail(std::string("stage is missing ") + k);
    Stage s;
    s.name = text::unescape(kv["payload"]);
    s.epsilon = r.number(kv["eps"]);
    s.view = text::unescape(kv["view"]);
    pending.push_back({kv["kind"], std::move(s)});
  }

  const std::map<std::string, std::function<std::shared_ptr<StageClassifier>(detail::PayloadContext&)>> parsers{
      {"snow", detail::read_snow},
      {"count", detail::read_count},
      {"table", detail::read_table},
      {"dt-node", detail::read_dt_node},
  };
  PayloadMap payloads;
  std::size_t npayloads = ctx.count_line("payloads");
  for (std::size_t i = 0; i < npayloads; ++i) {
    line = r.expect("payload");
    toks = ctx.keyed(line, "payload", 3);
    std::string name = text::unescape(toks[1]);
    auto parser = parsers.find(std::string(toks[2]));
    if (parser == parsers.end()) r.fail("unknown classifier kind '" + std::string(toks[2]) + "'");
    if (payloads.count(name)) r.fail("duplicate payload '" + name + "'");
    payloads[name] = parser->second(ctx);
    line = r.expect("end");
    if (text::split_ws(line) != std::vector<std::string_view>{"end"}) r.fail("expected 'end' after payload");
  }

  for (auto& p : pending) {
    auto it = payloads.find(p.stage.name);
    if (it == payloads.end()) r.fail("missing payload '" + p.stage.name + "'");
    const auto& cls = it->second;
    if (cls->kind() != p.kind) r.fail("stage kind does not match payload kind for '" + p.stage.name + "'");
    p.stage.classifier = cls;
    model.stages.push_back(std::move(p.stage));
  }
  if (auto problems = sm_validate(model); !problems.empty()) r.fail("invalid model: " + problems.front());
  if (payloads_out) *payloads_out = std::move(payloads);
  return model;
}

inline void expect_magic(text::LineReader& r) {
  auto first = r.next();
  if (!first) r.fail("empty model file", 1);
  if (*first != kModelMagic) throw VersionError(r.source(), r.line(), "unsupported model version '" + *first + "', expected SMV1");
}

inline void expect_trailer(text::LineReader& r) {
  std::string line = r.expect("END");
  if (line != "END") r.fail("expected END");
}

inline SequentialModel read_model(std::istream& in, const std::string& source = "<model>") {
  text::LineReader r(in, source);
  expect_magic(r);
  SequentialModel model = read_model_body(r);
  expect_trailer(r);
  return model;
}

inline SequentialModel parse_model(const std::string& s) {
  std::istringstream in(s);
  return read_model(in);
}

/// Structural equality: alphabet, features, views, combine mode, and each
/// stage's name, threshold, view and classifier contents.
inline bool models_equal(const SequentialModel& a, const SequentialModel& b) {
  if (!(a.alphabet == b.alphabet) || a.combine != b.combine || a.views != b.views) return false;
  if (!(*a.features == *b.features) || a.stages.size() != b.stages.size()) return false;
  for (std::size_t i = 0; i < a.stages.size(); ++i) {
    const auto &x = a.stages[i], &y = b.stages[i];
    if (x.name != y.name || x.epsilon != y.epsilon || x.view != y.view) return false;
    if (!x.classifier->equals(*y.classifier)) return false;
  }
  return true;
}

}  // namespace seqm
