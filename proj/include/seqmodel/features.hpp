// POS-tagging features: the two-column corpus format, the training lexicon,
// and the contextual and lexical feature templates.
#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <regex>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "seqmodel/core.hpp"
#include "seqmodel/text_format.hpp"

namespace seqm {

struct Token {
  std::string surface;
  std::optional<std::string> tag;
};

struct Sentence {
  std::vector<Token> tokens;

  std::size_t size() const noexcept { return tokens.size(); }
};

struct TaggedCorpus {
  std::vector<Sentence> sentences;

  std::size_t token_count() const {
    std::size_t n = 0;
    for (const auto& s : sentences) n += s.size();
    return n;
  }
  bool empty() const noexcept { return sentences.empty(); }
};

// ---------------------------------------------------------------------------
// Corpus format: `surface<TAB>tag` per line, blank line between sentences.
// Lines starting with '#' that contain no tab are comments.

inline TaggedCorpus read_corpus(std::istream& in, const std::string& source = "<corpus>", bool require_tags = true) {
  text::LineReader reader(in, source);
  TaggedCorpus corpus;
  Sentence current;
  auto flush = [&] {
    if (!current.tokens.empty()) corpus.sentences.push_back(std::move(current));
    current = Sentence{};
  };
  while (auto line = reader.next()) {
    if (line->empty()) {
      flush();
      continue;
    }
    auto tab = line->find('\t');
    if (tab == std::string::npos) {
      if ((*line)[0] == '#') continue;
      if (require_tags) reader.fail("expected 'surface<TAB>tag'");
      current.tokens.push_back(Token{*line, std::nullopt});
      continue;
    }
    std::string surface = line->substr(0, tab);
    std::string tag = line->substr(tab + 1);
    if (surface.empty()) reader.fail("empty surface form");
    if (tag.find('\t') != std::string::npos) reader.fail("more than two columns");
    if (tag.empty()) {
      if (require_tags) reader.fail("empty tag");
      current.tokens.push_back(Token{surface, std::nullopt});
    } else {
      current.tokens.push_back(Token{surface, tag});
    }
  }
  flush();
  return corpus;
}

inline void write_corpus(std::ostream& os, const TaggedCorpus& corpus) {
  for (const auto& s : corpus.sentences) {
    for (const auto& t : s.tokens) os << t.surface << '\t' << t.tag.value_or("") << '\n';
    os << '\n';
  }
}

// ---------------------------------------------------------------------------
// UTF-8 helpers. Case handling covers ASCII and Latin-1 letters.

namespace utf8 {

inline std::vector<std::string_view> code_points(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    auto b = static_cast<unsigned char>(s[i]);
    std::size_t len = b < 0x80 ? 1 : (b >> 5) == 0x6 ? 2 : (b >> 4) == 0xE ? 3 : (b >> 3) == 0x1E ? 4 : 1;
    len = std::min(len, s.size() - i);
    out.push_back(s.substr(i, len));
    i += len;
  }
  return out;
}

inline std::uint32_t decode(std::string_view cp) {
  auto b = [&](std::size_t i) { return static_cast<std::uint32_t>(static_cast<unsigned char>(cp[i])); };
  switch (cp.size()) {
    case 1: return b(0);
    case 2: return ((b(0) & 0x1F) << 6) | (b(1) & 0x3F);
    case 3: return ((b(0) & 0x0F) << 12) | ((b(1) & 0x3F) << 6) | (b(2) & 0x3F);
    default: return ((b(0) & 0x07) << 18) | ((b(1) & 0x3F) << 12) | ((b(2) & 0x3F) << 6) | (b(3) & 0x3F);
  }
}

inline bool is_upper(std::uint32_t c) {
  return (c >= 'A' && c <= 'Z') || (c >= 0xC0 && c <= 0xDE && c != 0xD7);
}

inline std::string lower(std::string_view cp) {
  std::uint32_t c = decode(cp);
  if (c >= 'A' && c <= 'Z') return std::string(1, static_cast<char>(c + 32));
  if (c >= 0xC0 && c <= 0xDE && c != 0xD7) {
    c += 0x20;
    return {static_cast<char>(0xC0 | (c >> 6)), static_cast<char>(0x80 | (c & 0x3F))};
  }
  return std::string(cp);
}

}  // namespace utf8

inline bool is_capitalized(std::string_view word) {
  auto cps = utf8::code_points(word);
  return !cps.empty() && utf8::is_upper(utf8::decode(cps.front()));
}

// ---------------------------------------------------------------------------
// Lexicon

struct WordEntry {
  std::map<std::string, std::size_t> tag_counts;
  std::string most_frequent;
  std::size_t count = 0;
};

class Lexicon {
 public:
  void add(const std::string& word, const std::string& tag, std::size_t times = 1) {
    auto& e = words_[word];
    e.tag_counts[tag] += times;
    e.count += times;
    tag_frequency_[tag] += times;
  }

  /// Most-frequent tag per word; ties go to the lexicographically smallest tag.
  void finalize() {
    for (auto& [w, e] : words_) {
      std::size_t best = 0;
      for (const auto& [tag, n] : e.tag_counts)
        if (n > best) {
          best = n;
          e.most_frequent = tag;
        }
    }
  }

  const WordEntry* find(std::string_view word) const {
    auto it = words_.find(std::string(word));
    return it == words_.end() ? nullptr : &it->second;
  }
  bool contains(std::string_view word) const { return find(word) != nullptr; }

  const std::unordered_map<std::string, WordEntry>& words() const noexcept { return words_; }
  const std::map<std::string, std::size_t>& tag_frequency() const noexcept { return tag_frequency_; }
  std::size_t size() const noexcept { return words_.size(); }

  void erase(std::string_view word) {
    auto it = words_.find(std::string(word));
    if (it == words_.end()) return;
    for (const auto& [tag, n] : it->second.tag_counts) tag_frequency_[tag] -= n;
    words_.erase(it);
  }

  bool operator==(const Lexicon& o) const {
    if (words_.size() != o.words_.size() || tag_frequency_ != o.tag_frequency_) return false;
    for (const auto& [w, e] : words_) {
      auto it = o.words_.find(w);
      if (it == o.words_.end() || it->second.tag_counts != e.tag_counts) return false;
    }
    return true;
  }

 private:
  std::unordered_map<std::string, WordEntry> words_;
  std::map<std::string, std::size_t> tag_frequency_;
};

inline Lexicon build_lexicon(const TaggedCorpus& corpus) {
  if (corpus.empty()) throw InvalidInput("build_lexicon: empty corpus");
  Lexicon lex;
  for (const auto& s : corpus.sentences)
    for (const auto& t : s.tokens) {
      if (!t.tag) throw InvalidInput("build_lexicon: untagged token '" + t.surface + "'");
      lex.add(t.surface, *t.tag);
    }
  lex.finalize();
  return lex;
}

inline constexpr std::string_view kUnknownCapitalizedTag = "NNP";
inline constexpr std::string_view kUnknownTag = "NN";
inline constexpr std::string_view kNumericTag = "CD";

/// Most frequent training tag for known words; NNP for capitalized unknown
/// words and NN otherwise.
inline std::string baseline_tag(std::string_view word, const Lexicon& lex) {
  if (const auto* e = lex.find(word)) return e->most_frequent;
  return std::string(is_capitalized(word) ? kUnknownCapitalizedTag : kUnknownTag);
}

/// Digits with optional interior '.', ',' or '-' separators.
inline constexpr std::string_view kDefaultNumericPattern = "[0-9]+([.,-][0-9]+)*";

class NumericPattern {
 public:
  explicit NumericPattern(std::string pattern = std::string(kDefaultNumericPattern))
      : source_(std::move(pattern)), re_(source_, std::regex::ECMAScript | std::regex::optimize) {}
  bool matches(std::string_view word) const { return std::regex_match(word.begin(), word.end(), re_); }
  const std::string& source() const noexcept { return source_; }

 private:
  std::string source_;
  std::regex re_;
};

inline bool is_unknown(std::string_view word, const Lexicon& lex, const NumericPattern& numeric) {
  return !lex.contains(word) && !numeric.matches(word);
}

// ---------------------------------------------------------------------------
// Feature templates

inline constexpr std::string_view kSentenceStart = "<S>";
inline constexpr std::string_view kSentenceEnd = "</S>";

/// Feature groups; a feature's group is the prefix before ':'.
namespace groups {
inline const std::vector<std::string> kContextual{"t-1", "t+1", "t-2", "t+2", "t-1&t+1", "t-2&t-1", "t+1&t+2",
                                                  "base", "w"};
inline const std::vector<std::string> kCapitalization{"cap"};
inline const std::vector<std::string> kSuffix{"suf1", "suf2", "suf3"};
}  // namespace groups

/// Capitalization and 1/2/3-character suffixes, guarded by
/// length > 3, > 4, > 5 code points. Suffixes are lowercased.
inline std::vector<std::string> extract_lexical(std::string_view word) {
  if (word.empty()) throw InvalidInput("extract_lexical: empty word");
  std::vector<std::string> out;
  auto cps = utf8::code_points(word);
  if (utf8::is_upper(utf8::decode(cps.front()))) out.emplace_back("cap");
  for (std::size_t k = 1; k <= 3; ++k) {
    if (cps.size() <= k + 2) break;
    std::string suffix;
    for (std::size_t i = cps.size() - k; i < cps.size(); ++i) suffix += utf8::lower(cps[i]);
    out.push_back("suf" + std::to_string(k) + ":" + suffix);
  }
  return out;
}

/// Contextual features around position i. Left neighbours use the tags already assigned
/// (`left_tags[j]` for j < i); right neighbours use their baseline tags.
/// Out-of-range positions read as <S> on the left and </S> on the right.
inline std::vector<std::string> extract_contextual(const Sentence& s, std::size_t i,
                                                   const std::vector<std::string>& left_tags, const Lexicon& lex,
                                                   bool include_baseline) {
  if (i >= s.size()) throw InvalidInput("extract_contextual: index out of range");
  if (left_tags.size() < i) throw InvalidInput("extract_contextual: missing left-context tags");

  auto left = [&](std::size_t back) -> std::string {
    return i >= back ? left_tags[i - back] : std::string(kSentenceStart);
  };
  auto right = [&](std::size_t ahead) -> std::string {
    return i + ahead < s.size() ? baseline_tag(s.tokens[i + ahead].surface, lex) : std::string(kSentenceEnd);
  };
  const std::string p1 = left(1), p2 = left(2), n1 = right(1), n2 = right(2);

  std::vector<std::string> out{
      "t-1:" + p1,
      "t+1:" + n1,
      "t-2:" + p2,
      "t+2:" + n2,
      "t-1&t+1:" + p1 + "&" + n1,
      "t-2&t-1:" + p2 + "&" + p1,
      "t+1&t+2:" + n1 + "&" + n2,
  };
  const std::string& word = s.tokens[i].surface;
  if (include_baseline) out.push_back("base:" + baseline_tag(word, lex));
  out.push_back("w:" + word);
  return out;
}

}  // namespace seqm
