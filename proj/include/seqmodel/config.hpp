// key=value run configuration: the tagger keys of set_config_key plus the
// split and path keys used by the command-line tool.
//
//   # comment
//   mode = sm
//   eps.f2 = 0.01
//   split.seed = 1
//
// Blank lines and lines starting with '#' are ignored. Unknown keys, repeated
// keys and malformed values are errors that name the line.
#pragma once

#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <string>

#include "seqmodel/core.hpp"
#include "seqmodel/tagger.hpp"
#include "seqmodel/text_format.hpp"

namespace seqm {

struct RunConfig {
  TaggerConfig tagger;
  std::uint64_t split_seed = 1;
  double test_fraction = 0.1;
  std::optional<std::string> corpus;
  std::optional<std::string> model;
};

namespace detail {

inline std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace detail

inline void set_run_key(RunConfig& c, const std::string& key, const std::string& value) {
  if (key == "split.seed") {
    auto v = text::parse_int<std::uint64_t>(value);
    if (!v) throw InvalidInput("split.seed expects a non-negative integer");
    c.split_seed = *v;
  } else if (key == "split.test_fraction") {
    auto v = text::parse_double(value);
    if (!v || !(*v > 0.0 && *v < 1.0)) throw InvalidInput("split.test_fraction must lie in (0,1)");
    c.test_fraction = *v;
  } else if (key == "corpus") {
    c.corpus = value;
  } else if (key == "model") {
    c.model = value;
  } else {
    set_config_key(c.tagger, key, value);
  }
}

inline RunConfig parse_config(std::istream& in, const std::string& source = "<config>") {
  text::LineReader r(in, source);
  RunConfig c;
  std::map<std::string, std::pair<std::string, std::size_t>> seen;  // key -> (value, line)
  while (auto line = r.next()) {
    std::string body = detail::trim(*line);
    if (body.empty() || body[0] == '#') continue;
    auto eq = body.find('=');
    if (eq == std::string::npos) r.fail("expected 'key = value'");
    std::string key = detail::trim(std::string_view(body).substr(0, eq));
    std::string value = detail::trim(std::string_view(body).substr(eq + 1));
    if (key.empty()) r.fail("missing key");
    if (auto it = seen.find(key); it != seen.end()) {
      if (it->second.first == value)
        r.fail("key '" + key + "' repeats line " + std::to_string(it->second.second));
      r.fail("key '" + key + "' conflicts with line " + std::to_string(it->second.second));
    }
    seen.emplace(key, std::pair{value, r.line()});
    try {
      set_run_key(c, key, value);
    } catch (const InvalidInput& e) {
      r.fail(e.what());
    }
  }
  try {
    c.tagger.validate();
  } catch (const InvalidInput& e) {
    throw ParseError(source, r.line(), e.what());
  }
  return c;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config '" + path + "'");
  return parse_config(in, path);
}

}  // namespace seqm
