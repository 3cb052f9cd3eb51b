// Seeded synthetic tagged corpora.
//
// english_like_corpus: a small English-flavoured grammar over Penn-style tags
// with a Zipfian open-class lexicon, regular suffix morphology, noun/verb
// root sharing, capitalized proper nouns, numbers and sentence-initial
// capitalization. Rare open-class words give a realistic unknown-word tail.
//
// ambiguity_corpus: many-tag corpus from a sparse first-order tag chain in
// which every word carries a small ambiguity class; used for the training-cost
// comparison.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "seqmodel/features.hpp"

namespace seqm::synth {

namespace detail {

/// Samples ranks 0..n-1 with probability proportional to 1/(r+1)^s.
class Zipf {
 public:
  Zipf(std::size_t n, double s) {
    std::vector<double> w(n);
    for (std::size_t r = 0; r < n; ++r) w[r] = 1.0 / std::pow(static_cast<double>(r + 1), s);
    dist_ = std::discrete_distribution<std::size_t>(w.begin(), w.end());
  }
  std::size_t operator()(std::mt19937_64& rng) { return dist_(rng); }

 private:
  std::discrete_distribution<std::size_t> dist_;
};

inline bool chance(std::mt19937_64& rng, double p) { return std::bernoulli_distribution(p)(rng); }

template <class T>
const T& pick(std::mt19937_64& rng, const std::vector<T>& v) {
  return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
}

/// Pronounceable root such as "bralen" or "tos".
inline std::string make_root(std::mt19937_64& rng) {
  static const std::vector<std::string> onset{"b", "br", "c", "cl", "d", "dr", "f", "fl", "g", "gr", "h",
                                              "j", "k",  "l", "m",  "n", "p", "pl", "pr", "r", "s",  "st",
                                              "sp", "t", "tr", "v", "w", "z", "sh", "ch", "th"};
  static const std::vector<std::string> vowel{"a", "e", "i", "o", "u", "ai", "ea", "oo", "ou"};
  static const std::vector<std::string> coda{"", "", "n", "m", "r", "l", "t", "d", "k", "p", "rn", "nd", "st"};
  std::size_t syllables = std::discrete_distribution<std::size_t>({0, 3, 5, 2})(rng);
  std::string out;
  for (std::size_t i = 0; i < syllables; ++i) out += pick(rng, onset) + pick(rng, vowel) + (i + 1 == syllables ? pick(rng, coda) : "");
  return out;
}

inline bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

inline std::string plural(const std::string& w) {
  if (ends_with(w, "s") || ends_with(w, "x") || ends_with(w, "ch") || ends_with(w, "sh")) return w + "es";
  if (ends_with(w, "y") && w.size() > 1 && std::string("aeiou").find(w[w.size() - 2]) == std::string::npos)
    return w.substr(0, w.size() - 1) + "ies";
  return w + "s";
}

inline std::string strip_final_e(const std::string& w) { return ends_with(w, "e") ? w.substr(0, w.size() - 1) : w; }

inline std::string capitalize(std::string w) {
  if (!w.empty() && w[0] >= 'a' && w[0] <= 'z') w[0] = static_cast<char>(w[0] - 32);
  return w;
}

}  // namespace detail

struct EnglishLikeOptions {
  std::size_t sentences = 6000;
  std::uint64_t seed = 1;
  std::size_t nouns = 2500;
  std::size_t verbs = 900;
  std::size_t adjectives = 900;
  std::size_t proper = 1200;
  double zipf = 1.0;
  double noun_verb_sharing = 0.25;  // fraction of verb roots that are also nouns
};

/// Sentences from a fixed grammar; see the file comment.
class EnglishLikeGenerator {
 public:
  explicit EnglishLikeGenerator(const EnglishLikeOptions& opt)
      : opt_(opt),
        rng_(opt.seed),
        noun_rank_(opt.nouns, opt.zipf),
        verb_rank_(opt.verbs, opt.zipf),
        adj_rank_(opt.adjectives, opt.zipf),
        proper_rank_(opt.proper, opt.zipf) {
    build_lexicon();
  }

  TaggedCorpus generate() {
    TaggedCorpus c;
    for (std::size_t i = 0; i < opt_.sentences; ++i) c.sentences.push_back(sentence());
    return c;
  }

 private:
  using Words = std::vector<Token>;

  void emit(Words& out, const std::string& w, const char* tag) { out.push_back(Token{w, std::string(tag)}); }

  std::string fresh_root() {
    for (;;) {
      std::string r = detail::make_root(rng_);
      if (r.size() >= 3 && used_.insert(r).second) return r;
    }
  }

  void build_lexicon() {
    using detail::chance;
    using detail::pick;
    static const std::vector<std::string> noun_suffix{"", "", "", "tion", "ment", "ness", "ity", "er", "ism", "ance"};
    static const std::vector<std::string> adj_suffix{"", "ous", "ful", "ive", "al", "ic", "able", "less", "ish", "ent"};
    static const std::vector<std::string> verb_suffix{"", "", "", "ize", "ate", "ify", "en"};
    static const std::vector<std::string> place_suffix{"", "", "son", "ton", "ville", "berg", "ia"};
    // closed-class words are reserved so open-class roots never collide
    for (const char* w : {"the", "a", "an", "this", "that", "these", "those", "some", "every", "no", "each",
                          "of", "in", "on", "at", "with", "for", "from", "by", "about", "into", "over", "after",
                          "under", "between", "and", "or", "but", "he", "she", "it", "they", "we", "you",
                          "his", "her", "its", "their", "our", "will", "can", "would", "should", "may", "must",
                          "could", "to", "is", "are", "was", "were", "has", "have", "had", "not", "also", "very",
                          "often", "never", "still", "just", "which", "two", "three", "four", "five", "ten"})
      used_.insert(w);

    for (std::size_t i = 0; i < opt_.verbs; ++i) {
      std::string root = fresh_root() + pick(rng_, verb_suffix);
      used_.insert(root);
      verbs_.push_back(root);
    }
    for (std::size_t i = 0; i < opt_.nouns; ++i) {
      // Some noun lemmas reuse a verb root, giving NN/VB and NNS/VBZ ambiguity.
      if (chance(rng_, opt_.noun_verb_sharing * static_cast<double>(opt_.verbs) / static_cast<double>(opt_.nouns))) {
        nouns_.push_back(pick(rng_, verbs_));
        continue;
      }
      std::string root = fresh_root();
      std::string suf = pick(rng_, noun_suffix);
      nouns_.push_back(suf.empty() ? root : detail::strip_final_e(root) + suf);
      used_.insert(nouns_.back());
    }
    for (std::size_t i = 0; i < opt_.adjectives; ++i) {
      std::string root = fresh_root();
      std::string suf = pick(rng_, adj_suffix);
      adjectives_.push_back(suf.empty() ? root : detail::strip_final_e(root) + suf);
      used_.insert(adjectives_.back());
    }
    for (std::size_t i = 0; i < opt_.proper; ++i)
      proper_.push_back(detail::capitalize(fresh_root() + pick(rng_, place_suffix)));
  }

  const std::string& noun() { return nouns_[noun_rank_(rng_)]; }
  const std::string& verb() { return verbs_[verb_rank_(rng_)]; }
  const std::string& adjective() { return adjectives_[adj_rank_(rng_)]; }

  static std::string third_person(const std::string& v) { return detail::plural(v); }
  static std::string past(const std::string& v) {
    return detail::ends_with(v, "e") ? v + "d" : v + "ed";
  }
  static std::string gerund(const std::string& v) { return detail::strip_final_e(v) + "ing"; }

  std::string number() {
    std::uniform_int_distribution<int> n(1, 2000);
    switch (std::uniform_int_distribution<int>(0, 3)(rng_)) {
      case 0: return std::to_string(n(rng_));
      case 1: return std::to_string(n(rng_) % 100) + "." + std::to_string(n(rng_) % 10);
      case 2: return std::to_string(n(rng_) % 20 + 1) + "," + std::to_string(100 + n(rng_) % 900);
      default: return detail::pick(rng_, std::vector<std::string>{"two", "three", "four", "five", "ten"});
    }
  }

  void adjective_phrase(Words& out) {
    if (detail::chance(rng_, 0.12)) emit(out, detail::pick(rng_, std::vector<std::string>{"very", "also", "still"}), "RB");
    if (detail::chance(rng_, 0.1)) {
      emit(out, gerund(verb()), "VBG");
      return;
    }
    if (detail::chance(rng_, 0.08)) {
      emit(out, past(verb()), "VBN");
      return;
    }
    emit(out, adjective(), "JJ");
  }

  /// Returns true if the phrase is plural.
  bool noun_phrase(Words& out, int depth) {
    using detail::chance;
    using detail::pick;
    double r = std::uniform_real_distribution<double>(0, 1)(rng_);
    bool pl = false;
    if (r < 0.14) {
      emit(out, pick(rng_, proper_), "NNP");
      if (chance(rng_, 0.3)) emit(out, pick(rng_, proper_), "NNP");
    } else if (r < 0.24) {
      static const std::vector<std::pair<std::string, bool>> pronouns{
          {"he", false}, {"she", false}, {"it", false}, {"they", true}, {"we", true}, {"you", true}};
      const auto& p = pick(rng_, pronouns);
      emit(out, p.first, "PRP");
      return p.second;
    } else if (r < 0.30) {
      emit(out, number(), "CD");
      while (chance(rng_, 0.3)) adjective_phrase(out);
      emit(out, detail::plural(noun()), "NNS");
      pl = true;
    } else {
      pl = chance(rng_, 0.35);
      if (r < 0.40) {
        emit(out, pick(rng_, std::vector<std::string>{"his", "her", "its", "their", "our"}), "PRP$");
      } else if (pl) {
        if (chance(rng_, 0.6))
          emit(out, pick(rng_, std::vector<std::string>{"the", "these", "those", "some", "the", "the"}), "DT");
      } else {
        emit(out, pick(rng_, std::vector<std::string>{"the", "a", "this", "that", "every", "each", "the", "a"}), "DT");
      }
      while (chance(rng_, 0.35)) adjective_phrase(out);
      if (chance(rng_, 0.1)) emit(out, noun(), "NN");  // noun compound
      if (pl)
        emit(out, detail::plural(noun()), "NNS");
      else
        emit(out, noun(), "NN");
    }
    if (depth < 2 && chance(rng_, 0.2)) prep_phrase(out, depth + 1);
    if (depth < 1 && chance(rng_, 0.06)) {
      emit(out, "which", "WDT");
      verb_phrase(out, pl, depth + 1);
    }
    return pl;
  }

  void prep_phrase(Words& out, int depth) {
    static const std::vector<std::string> preps{"of", "in", "on", "at", "with", "for", "from", "by", "about",
                                                "into", "over", "after", "under", "between", "of", "in"};
    emit(out, detail::pick(rng_, preps), "IN");
    noun_phrase(out, depth);
  }

  void object(Words& out, int depth) {
    if (detail::chance(rng_, 0.75)) noun_phrase(out, depth);
    if (depth < 2 && detail::chance(rng_, 0.3)) prep_phrase(out, depth + 1);
  }

  void verb_phrase(Words& out, bool plural_subject, int depth) {
    using detail::chance;
    using detail::pick;
    if (chance(rng_, 0.08)) emit(out, pick(rng_, std::vector<std::string>{"also", "often", "never", "still", "just"}), "RB");
    double r = std::uniform_real_distribution<double>(0, 1)(rng_);
    if (r < 0.30) {
      if (plural_subject)
        emit(out, verb(), "VBP");
      else
        emit(out, third_person(verb()), "VBZ");
      object(out, depth);
    } else if (r < 0.55) {
      emit(out, past(verb()), "VBD");
      object(out, depth);
    } else if (r < 0.67) {
      emit(out, pick(rng_, std::vector<std::string>{"will", "can", "would", "should", "may", "must", "could"}), "MD");
      if (chance(rng_, 0.1)) emit(out, "not", "RB");
      emit(out, verb(), "VB");
      object(out, depth);
    } else if (r < 0.77) {
      emit(out, plural_subject ? (chance(rng_, 0.5) ? "are" : "were") : (chance(rng_, 0.5) ? "is" : "was"),
           plural_subject ? "VBP" : "VBZ");
      if (chance(rng_, 0.2)) emit(out, "very", "RB");
      emit(out, adjective(), "JJ");
    } else if (r < 0.85) {
      emit(out, plural_subject ? "are" : "is", plural_subject ? "VBP" : "VBZ");
      emit(out, gerund(verb()), "VBG");
      object(out, depth);
    } else if (r < 0.93) {
      emit(out, plural_subject ? "have" : "has", plural_subject ? "VBP" : "VBZ");
      emit(out, past(verb()), "VBN");
      object(out, depth);
    } else {
      emit(out, past(verb()), "VBD");
      emit(out, "to", "TO");
      emit(out, verb(), "VB");
      object(out, depth);
    }
    if (chance(rng_, 0.07)) emit(out, adjective() + "ly", "RB");
  }

  Sentence sentence() {
    Words w;
    if (detail::chance(rng_, 0.12)) {
      prep_phrase(w, 1);
      emit(w, ",", ",");
    }
    bool pl = noun_phrase(w, 0);
    verb_phrase(w, pl, 0);
    if (detail::chance(rng_, 0.12)) {
      emit(w, detail::pick(rng_, std::vector<std::string>{"and", "but", "or"}), "CC");
      bool pl2 = noun_phrase(w, 1);
      verb_phrase(w, pl2, 1);
    }
    emit(w, ".", ".");
    if (*w.front().tag != "NNP") w.front().surface = detail::capitalize(w.front().surface);
    return Sentence{std::move(w)};
  }

  EnglishLikeOptions opt_;
  std::mt19937_64 rng_;
  detail::Zipf noun_rank_, verb_rank_, adj_rank_, proper_rank_;
  std::set<std::string> used_;
  std::vector<std::string> nouns_, verbs_, adjectives_, proper_;
};

inline TaggedCorpus english_like_corpus(const EnglishLikeOptions& opt = {}) {
  return EnglishLikeGenerator(opt).generate();
}

// ---------------------------------------------------------------------------

struct AmbiguityOptions {
  std::size_t tags = 50;
  std::size_t words = 3000;
  std::size_t max_class = 5;  // ambiguity class sizes are drawn from 1..max_class
  std::size_t sentences = 3000;
  std::size_t min_length = 8;
  std::size_t max_length = 20;
  std::size_t successors = 6;  // nonzero transitions per tag
  double zipf = 0.8;
  std::uint64_t seed = 1;
};

/// Tags follow a sparse random first-order chain; each word has an ambiguity
/// class of 1..max_class tags and is emitted by any tag of its class.
inline TaggedCorpus ambiguity_corpus(const AmbiguityOptions& opt = {}) {
  if (opt.tags < 2 || opt.max_class < 1 || opt.words < opt.tags) throw InvalidInput("ambiguity corpus: bad options");
  std::mt19937_64 rng(opt.seed);
  auto tag_name = [](std::size_t t) { return std::string("T") + (t < 10 ? "0" : "") + std::to_string(t); };

  std::vector<std::vector<std::size_t>> emitters(opt.tags);  // tag -> words
  std::uniform_int_distribution<std::size_t> any_tag(0, opt.tags - 1), class_size(1, opt.max_class);
  for (std::size_t w = 0; w < opt.words; ++w) {
    std::set<std::size_t> cls;
    if (w < opt.tags) cls.insert(w);  // every tag emits at least one word
    std::size_t k = class_size(rng);
    while (cls.size() < k) cls.insert(any_tag(rng));
    for (std::size_t t : cls) emitters[t].push_back(w);
  }
  std::vector<detail::Zipf> emit_rank;
  for (const auto& e : emitters) emit_rank.emplace_back(e.size(), opt.zipf);

  std::vector<std::vector<std::size_t>> next(opt.tags);
  std::vector<std::discrete_distribution<std::size_t>> next_dist;
  for (std::size_t t = 0; t < opt.tags; ++t) {
    std::set<std::size_t> succ;
    succ.insert((t + 1) % opt.tags);  // keeps the chain irreducible
    while (succ.size() < std::min(opt.successors, opt.tags)) succ.insert(any_tag(rng));
    next[t].assign(succ.begin(), succ.end());
    std::vector<double> w;
    std::uniform_real_distribution<double> u(0.1, 1.0);
    for (std::size_t i = 0; i < next[t].size(); ++i) w.push_back(u(rng));
    next_dist.emplace_back(w.begin(), w.end());
  }

  auto word_name = [](std::size_t w) {
    static const char* syl[] = {"ka", "lo", "mi", "ne", "su", "ta", "vo", "ri", "zu", "pe"};
    std::string s;
    do {
      s += syl[w % 10];
      w /= 10;
    } while (w > 0);
    return s + "x";
  };

  TaggedCorpus corpus;
  std::uniform_int_distribution<std::size_t> len(opt.min_length, opt.max_length);
  for (std::size_t i = 0; i < opt.sentences; ++i) {
    Sentence s;
    std::size_t t = any_tag(rng);
    std::size_t n = len(rng);
    for (std::size_t j = 0; j < n; ++j) {
      std::size_t w = emitters[t][emit_rank[t](rng)];
      s.tokens.push_back(Token{word_name(w), tag_name(t)});
      t = next[t][next_dist[t](rng)];
    }
    corpus.sentences.push_back(std::move(s));
  }
  return corpus;
}

}  // namespace seqm::synth
