#pragma once

// Synthetic desk corpora built from the bundled reading table.
//
// Syllables are split into a filler family and a term family. Filler words
// only use filler characters, one character per syllable. By default the LM
// never sees a term character, so the homophone confusion set offers no
// candidates and any repair must come from retrieval. lm_term_chars and
// lm_term_rate/lm_term_share let the LM see term characters and some of the
// terms. Term characters have exactly one reading and at least one
// homophone, which is where injected errors come from.

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "rspell/pinyin.hpp"
#include "rspell/utf8.hpp"

namespace rspell::testkit {

struct Sample {
  std::string source;
  std::string target;
};

struct SyntheticSpec {
  std::size_t terms = 500;
  std::size_t sentences = 200;
  double error_rate = 0.75;       // share of sentences with one injected error
  double real_word_rate = 0.7;    // share of misspellings that are dictionary words
  std::size_t two_error = 40;
  std::size_t clean = 100;
  std::size_t lm_sentences = 400;
  std::size_t filler_syllables = 40;
  double lm_term_rate = 0.0;      // share of LM sentences carrying a correct term
  double lm_term_share = 1.0;     // share of the terms the LM may see
  bool lm_term_chars = false;     // LM also sees every term-family character, out of term context
  std::uint64_t seed = 20231;
};

struct SyntheticDomain {
  std::vector<std::string> lexicon;
  std::vector<std::string> general_words;
  std::vector<std::string> lm_corpus;
  std::vector<Sample> single_error;
  std::vector<Sample> two_error;
  std::vector<std::string> clean;
};

namespace detail {

class SyntheticBuilder {
 public:
  SyntheticBuilder(const CharReadingTable& table, const FuzzyRules& rules, const SyntheticSpec& spec)
      : spec_(spec), rng_(spec.seed) {
    std::map<std::string, std::vector<char32_t>> groups;
    for (const auto& [c, readings] : table.char_map()) {
      if (c < 0x4E00 || c > 0x9FFF || readings.size() != 1 || readings[0].opaque) continue;
      groups[normalize(readings[0], rules).raw].push_back(c);
    }
    std::vector<std::string> syllables;
    for (auto& [syl, chars] : groups) {
      std::sort(chars.begin(), chars.end());
      syllables.push_back(syl);
    }
    std::shuffle(syllables.begin(), syllables.end(), rng_);
    for (const auto& syl : syllables) {
      auto& chars = groups[syl];
      if (filler_.size() < spec.filler_syllables) {
        filler_.push_back(chars[pick(chars.size())]);
      } else if (chars.size() >= 2) {
        term_groups_.push_back({syl, chars});
      }
    }
  }

  SyntheticDomain build() {
    SyntheticDomain d;
    make_filler_words();
    d.general_words = filler_words_;

    // Two-error pairs first: T1 is two characters, T2 three.
    std::vector<std::pair<std::u32string, std::u32string>> pairs;
    while (pairs.size() < spec_.two_error) {
      auto t1 = new_term(2);
      auto t2 = new_term(3);
      if (t1.empty() || t2.empty()) continue;
      pairs.emplace_back(t1, t2);
    }
    const std::size_t first_single = terms_.size();
    while (terms_.size() < spec_.terms) {
      const double u = unit();
      new_term(u < 0.5 ? 2 : u < 0.8 ? 3 : 4);
    }
    for (const auto& t : terms_) d.lexicon.push_back(utf8::encode(t));

    for (const auto& [t1, t2] : pairs) {
      const std::u32string x1b = substitute(t1, 0);
      const std::u32string x4b = substitute(t2, 1);
      d.general_words.push_back(utf8::encode(x1b + t2.substr(0, 1)));  // x1' x2 x3
      d.general_words.push_back(utf8::encode(x4b));                    // x3 x4' x5
      const std::string pre = fillers(2, 3);
      const std::string post = fillers(2, 3);
      d.two_error.push_back({pre + utf8::encode(x1b + x4b) + post + "。", pre + utf8::encode(t1 + t2) + post + "。"});
    }

    const auto any_term = [&] { return terms_[first_single + pick(terms_.size() - first_single)]; };
    for (std::size_t s = 0; s < spec_.sentences; ++s) {
      const std::u32string term = any_term();
      std::u32string shown = term;
      if (unit() < spec_.error_rate) {
        shown = substitute(term, pick(term.size()));
        if (unit() < spec_.real_word_rate) d.general_words.push_back(utf8::encode(shown));
      }
      std::string src = fillers(1, 3), tgt = src;
      src += utf8::encode(shown);
      tgt += utf8::encode(term);
      if (unit() < 0.4) {
        const std::string mid = fillers(1, 2);
        const std::string other = utf8::encode(any_term());
        src += mid + other;
        tgt += mid + other;
      }
      const std::string tail = fillers(1, 3) + "。";
      d.single_error.push_back({src + tail, tgt + tail});
    }

    for (std::size_t s = 0; s < spec_.clean; ++s) {
      std::string line = fillers(1, 3) + utf8::encode(any_term()) + fillers(1, 3);
      if (unit() < 0.5) line += "，" + fillers(1, 2) + utf8::encode(any_term());
      d.clean.push_back(line + "。");
    }
    // cycle over the LM-visible terms so each of them is seen; they are
    // taken from the end, away from the two-error pairs
    const std::size_t visible = std::max<std::size_t>(1, static_cast<std::size_t>(spec_.lm_term_share * terms_.size()));
    std::size_t next_term = 0;
    for (std::size_t s = 0; s < spec_.lm_sentences; ++s) {
      std::string line = fillers(5, 10);
      if (spec_.lm_term_rate > 0.0 && unit() < spec_.lm_term_rate) {
        line += "，" + fillers(1, 2) + utf8::encode(terms_[terms_.size() - 1 - next_term++ % visible]) + fillers(1, 2);
      }
      if (unit() < 0.3) line += "，" + fillers(2, 5);
      d.lm_corpus.push_back(line + "。");
    }
    if (spec_.lm_term_chars) {
      // runs of three random term-family characters between filler words;
      // each character appears at least once
      std::vector<char32_t> chars;
      for (const auto& g : term_groups_) chars.insert(chars.end(), g.chars.begin(), g.chars.end());
      std::shuffle(chars.begin(), chars.end(), rng_);
      for (std::size_t i = 0; i < chars.size(); i += 6) {
        std::string line = fillers(1, 2);
        for (std::size_t j = i; j < std::min(i + 6, chars.size()); ++j) {
          line += utf8::encode(std::u32string(1, chars[j]));
          if (j == i + 2) line += fillers(1, 2);
        }
        d.lm_corpus.push_back(line + fillers(1, 2) + "。");
      }
    }
    return d;
  }

 private:
  struct Group {
    std::string syllable;
    std::vector<char32_t> chars;
  };

  std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
  double unit() { return std::uniform_real_distribution<double>(0.0, 1.0)(rng_); }

  void make_filler_words() {
    std::set<std::u32string> seen;
    while (filler_words_.size() < 150) {
      std::u32string w;
      const std::size_t len = 2 + pick(2);
      for (std::size_t i = 0; i < len; ++i) w.push_back(filler_[pick(filler_.size())]);
      if (seen.insert(w).second) filler_words_.push_back(utf8::encode(w));
    }
  }

  std::string fillers(std::size_t lo, std::size_t hi) {
    std::string out;
    const std::size_t n = lo + pick(hi - lo + 1);
    for (std::size_t i = 0; i < n; ++i) out += filler_words_[pick(filler_words_.size())];
    return out;
  }

  // A term whose key neither contains nor is contained in any other key,
  // so only the intended term aligns over an error. Empty on rejection.
  std::u32string new_term(std::size_t len) {
    std::u32string word;
    std::vector<std::string> key;
    for (std::size_t i = 0; i < len; ++i) {
      const Group& g = term_groups_[pick(term_groups_.size())];
      word.push_back(g.chars[pick(g.chars.size())]);
      key.push_back(g.syllable);
    }
    const auto join = [&](std::size_t from, std::size_t n) {
      std::string s;
      for (std::size_t i = from; i < from + n; ++i) s += key[i] + " ";
      return s;
    };
    if (sub_keys_.count(join(0, len))) return {};
    for (std::size_t n = 2; n < len; ++n) {
      for (std::size_t i = 0; i + n <= len; ++i) {
        if (keys_.count(join(i, n))) return {};
      }
    }
    keys_.insert(join(0, len));
    for (std::size_t n = 2; n <= len; ++n) {
      for (std::size_t i = 0; i + n <= len; ++i) sub_keys_.insert(join(i, n));
    }
    terms_.push_back(word);
    for (std::size_t i = 0; i < len; ++i) syllable_of_[word[i]] = key[i];
    return word;
  }

  // The term with position pos replaced by a homophone.
  std::u32string substitute(std::u32string term, std::size_t pos) {
    const std::string& syl = syllable_of_.at(term[pos]);
    const auto it = std::find_if(term_groups_.begin(), term_groups_.end(),
                                 [&](const Group& g) { return g.syllable == syl; });
    char32_t c = term[pos];
    while (c == term[pos]) c = it->chars[pick(it->chars.size())];
    term[pos] = c;
    return term;
  }

  SyntheticSpec spec_;
  std::mt19937_64 rng_;
  std::vector<char32_t> filler_;
  std::vector<Group> term_groups_;
  std::vector<std::string> filler_words_;
  std::vector<std::u32string> terms_;
  std::set<std::string> keys_;
  std::set<std::string> sub_keys_;
  std::map<char32_t, std::string> syllable_of_;
};

}  // namespace detail

inline SyntheticDomain make_synthetic_domain(const CharReadingTable& table, const FuzzyRules& rules,
                                             const SyntheticSpec& spec = {}) {
  return detail::SyntheticBuilder(table, rules, spec).build();
}

// Random sentences stitched from real words, for scale runs.
inline std::vector<std::string> word_salad(const std::vector<std::string>& words, std::size_t count,
                                           std::uint64_t seed, std::size_t min_words = 5,
                                           std::size_t max_words = 10) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> word(0, words.size() - 1);
  std::uniform_int_distribution<std::size_t> len(min_words, max_words);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < count; ++i) {
    std::string line;
    const std::size_t n = len(rng);
    for (std::size_t j = 0; j < n; ++j) {
      line += words[word(rng)];
      if (j + 1 == n / 2 && n > 6) line += "，";
    }
    out.push_back(line + "。");
  }
  return out;
}

}  // namespace rspell::testkit
