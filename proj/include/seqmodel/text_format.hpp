// Line-oriented text helpers shared by the model, corpus and config formats.
#pragma once

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "seqmodel/core.hpp"

namespace seqm::text {

/// Tokens in model files are whitespace-separated, so names escape space,
/// tab, newline, CR and '%' as %XX.
inline std::string escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char ch : s) {
    switch (ch) {
      case ' ': out += "%20"; break;
      case '\t': out += "%09"; break;
      case '\n': out += "%0A"; break;
      case '\r': out += "%0D"; break;
      case '%': out += "%25"; break;
      default: out += ch;
    }
  }
  if (out.empty()) out = "%00";  // keeps empty names a visible token
  return out;
}

inline std::string unescape(std::string_view s) {
  if (s == "%00") return {};
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '%' && i + 2 < s.size()) {
      int v = 0;
      auto r = std::from_chars(s.data() + i + 1, s.data() + i + 3, v, 16);
      if (r.ec == std::errc() && r.ptr == s.data() + i + 3) {
        out += static_cast<char>(v);
        i += 2;
        continue;
      }
    }
    out += s[i];
  }
  return out;
}

/// 17 significant digits: enough for an exact binary64 round trip.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

inline std::optional<double> parse_double(std::string_view s) {
  std::string tmp(s);
  char* end = nullptr;
  double v = std::strtod(tmp.c_str(), &end);
  if (tmp.empty() || end != tmp.c_str() + tmp.size()) return std::nullopt;
  return v;
}

template <class Int>
std::optional<Int> parse_int(std::string_view s) {
  Int v{};
  auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

/// Reads lines while tracking the 1-based line number for error messages.
class LineReader {
 public:
  LineReader(std::istream& in, std::string source) : in_(in), source_(std::move(source)) {}

  std::optional<std::string> next() {
    std::string line;
    if (!std::getline(in_, line)) return std::nullopt;
    ++line_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
  }

  /// Next line, or a ParseError naming the truncation point.
  std::string expect(std::string_view what) {
    auto line = next();
    if (!line) fail("unexpected end of file, expected " + std::string(what), line_ + 1);
    return *line;
  }

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(source_, line_, what); }
  [[noreturn]] void fail(const std::string& what, std::size_t line) const { throw ParseError(source_, line, what); }

  std::size_t line() const noexcept { return line_; }
  const std::string& source() const noexcept { return source_; }

  double number(std::string_view tok) const {
    auto v = parse_double(tok);
    if (!v) fail("malformed number '" + std::string(tok) + "'");
    return *v;
  }

  template <class Int>
  Int integer(std::string_view tok) const {
    auto v = parse_int<Int>(tok);
    if (!v) fail("malformed integer '" + std::string(tok) + "'");
    return *v;
  }

 private:
  std::istream& in_;
  std::string source_;
  std::size_t line_ = 0;
};

}  // namespace seqm::text
