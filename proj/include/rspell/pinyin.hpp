#pragma once

#include <algorithm>
#include <array>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "rspell/error.hpp"
#include "rspell/utf8.hpp"

namespace rspell {

// One tone-less pinyin syllable. Opaque syllables stand in for characters
// without a known reading: raw holds the character itself and the
// initial/final split is empty.
struct Syllable {
  std::string initial;
  std::string final;
  std::string raw;
  bool opaque = false;

  friend bool operator==(const Syllable&, const Syllable&) = default;
};

namespace detail {

inline constexpr std::array<std::string_view, 23> kInitials = {
    "zh", "ch", "sh", "b", "p", "m", "f", "d", "t", "n", "l", "g",
    "k",  "h",  "j",  "q", "x", "r", "z", "c", "s", "y", "w"};

inline bool all_lower_alpha(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= 'a' && c <= 'z'; });
}

inline bool has_vowel(std::string_view s) {
  return s.find_first_of("aeiouv") != std::string_view::npos;
}

inline std::optional<char> base_letter(char32_t c) {
  switch (c) {
    case U'ā': case U'á': case U'ǎ': case U'à': return 'a';
    case U'ē': case U'é': case U'ě': case U'è': case U'ê': case U'ế': case U'ề': return 'e';
    case U'ī': case U'í': case U'ǐ': case U'ì': return 'i';
    case U'ō': case U'ó': case U'ǒ': case U'ò': return 'o';
    case U'ū': case U'ú': case U'ǔ': case U'ù': return 'u';
    case U'ǖ': case U'ǘ': case U'ǚ': case U'ǜ': case U'ü': case U'Ü': return 'v';
    case U'ń': case U'ň': case U'ǹ': return 'n';
    case U'ḿ': return 'm';
    default: break;
  }
  if (c >= U'a' && c <= U'z') return static_cast<char>(c);
  if (c >= U'A' && c <= U'Z') return static_cast<char>(c - U'A' + U'a');
  return std::nullopt;
}

}  // namespace detail

// Reduces a reading such as "jiào", "jiao4" or "lu:" to tone-less lowercase
// letters ("v" for u-umlaut). Returns nullopt when anything else remains.
inline std::optional<std::string> strip_tone(std::string_view reading) {
  std::string out;
  const std::u32string cps = utf8::decode(reading);
  for (std::size_t i = 0; i < cps.size(); ++i) {
    const char32_t c = cps[i];
    if (c >= U'0' && c <= U'5' && i + 1 == cps.size()) break;  // trailing tone digit
    if (c == U':' && !out.empty() && out.back() == 'u') {
      out.back() = 'v';
      continue;
    }
    if (c == 0x0300 || c == 0x0301 || c == 0x0304 || c == 0x030C) continue;  // combining tone marks
    if (c == 0x0308 && !out.empty() && out.back() == 'u') {  // combining diaeresis
      out.back() = 'v';
      continue;
    }
    const auto letter = detail::base_letter(c);
    if (!letter) return std::nullopt;
    out.push_back(*letter);
  }
  if (out.empty()) return std::nullopt;
  return out;
}

// Splits a tone-less syllable into initial and final. Syllabic nasals
// ("m", "n", "ng", "hm", "hng") carry everything in the final.
inline std::optional<Syllable> parse_syllable(std::string_view toneless) {
  if (!detail::all_lower_alpha(toneless)) return std::nullopt;
  Syllable s;
  s.raw = std::string(toneless);
  for (std::string_view ini : detail::kInitials) {
    if (toneless.starts_with(ini)) {
      const std::string_view rest = toneless.substr(ini.size());
      if (!rest.empty() && detail::has_vowel(rest)) {
        s.initial = std::string(ini);
        s.final = std::string(rest);
        return s;
      }
      break;
    }
  }
  s.final = s.raw;
  return s;
}

// Accepts tone marks or digits; nullopt for anything that is not pinyin.
inline std::optional<Syllable> parse_reading(std::string_view reading) {
  const auto toneless = strip_tone(reading);
  if (!toneless) return std::nullopt;
  return parse_syllable(*toneless);
}

inline Syllable make_opaque(char32_t c) {
  Syllable s;
  s.raw = utf8::encode(c);
  s.opaque = true;
  return s;
}

struct PinyinString {
  std::vector<Syllable> syllables;

  std::size_t size() const noexcept { return syllables.size(); }
  bool empty() const noexcept { return syllables.empty(); }

  bool has_opaque() const {
    return std::any_of(syllables.begin(), syllables.end(), [](const Syllable& s) { return s.opaque; });
  }

  std::string text() const {
    std::string out;
    for (const auto& s : syllables) {
      if (!out.empty()) out.push_back(' ');
      out += s.raw;
    }
    return out;
  }

  // Parses a space-separated reading ("jiao zheng", "jiào zhèng").
  static std::optional<PinyinString> parse(std::string_view spaced) {
    PinyinString py;
    std::istringstream in{std::string(spaced)};
    std::string part;
    while (in >> part) {
      auto syl = parse_reading(part);
      if (!syl) return std::nullopt;
      py.syllables.push_back(std::move(*syl));
    }
    return py;
  }

  friend bool operator==(const PinyinString&, const PinyinString&) = default;
};

// Hanzi readings: per-character lists (most frequent first) and whole-word
// readings used to resolve polyphones in context.
class CharReadingTable {
 public:
  std::span<const Syllable> readings(char32_t c) const {
    const auto it = chars_.find(c);
    if (it == chars_.end()) return {};
    return it->second;
  }

  const PinyinString* word_reading(const std::string& word) const {
    const auto it = words_.find(word);
    return it == words_.end() ? nullptr : &it->second;
  }

  bool contains(char32_t c) const { return chars_.contains(c); }

  void set_char(char32_t c, std::vector<Syllable> readings) {
    if (!chars_.insert_or_assign(c, std::move(readings)).second) ++duplicate_keys_;
  }

  // The caller guarantees one syllable per character.
  void set_word(const std::string& word, PinyinString reading) {
    max_word_len_ = std::max(max_word_len_, reading.size());
    if (!words_.insert_or_assign(word, std::move(reading)).second) ++duplicate_keys_;
  }

  std::size_t char_count() const noexcept { return chars_.size(); }
  std::size_t word_count() const noexcept { return words_.size(); }
  std::size_t max_word_len() const noexcept { return max_word_len_; }
  // Keys that appeared more than once while loading; the last line won.
  std::size_t duplicate_keys() const noexcept { return duplicate_keys_; }

  const std::unordered_map<char32_t, std::vector<Syllable>>& char_map() const noexcept { return chars_; }

 private:
  std::unordered_map<char32_t, std::vector<Syllable>> chars_;
  std::unordered_map<std::string, PinyinString> words_;
  std::size_t max_word_len_ = 0;
  std::size_t duplicate_keys_ = 0;
};

namespace detail {

inline std::vector<std::string> split_tabs(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    out.emplace_back(line.substr(start, tab == std::string_view::npos ? std::string_view::npos : tab - start));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  return out;
}

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

inline std::string_view chomp(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == '\n')) s.remove_suffix(1);
  return s;
}

}  // namespace detail

inline constexpr std::string_view kWordsSentinel = "#WORDS";

// Reading-table TSV: "<char>\t<reading>..." lines, then a "#WORDS" line and
// "<word>\t<space-joined reading>" lines. Other '#' lines are comments.
inline CharReadingTable parse_reading_table(std::istream& in) {
  CharReadingTable table;
  std::string raw;
  std::size_t line_no = 0;
  bool word_section = false;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = detail::chomp(raw);
    if (detail::trim(line).empty()) continue;
    if (line == kWordsSentinel) {
      word_section = true;
      continue;
    }
    if (line.front() == '#') continue;
    const auto fields = detail::split_tabs(line);
    if (fields.size() < 2) throw ParseError("expected <key>\\t<reading>", line_no);
    const std::string key{detail::trim(fields[0])};
    const std::u32string key_chars = utf8::decode(key);
    if (key_chars.empty()) throw ParseError("empty key", line_no);
    if (!word_section) {
      if (key_chars.size() != 1) throw ParseError("character key must be a single code point: " + key, line_no);
      std::vector<Syllable> readings;
      for (std::size_t f = 1; f < fields.size(); ++f) {
        const std::string_view field = detail::trim(fields[f]);
        if (field.empty()) continue;
        auto syl = parse_reading(field);
        if (!syl) throw ParseError("invalid reading '" + std::string(field) + "'", line_no);
        if (std::find(readings.begin(), readings.end(), *syl) == readings.end()) {
          readings.push_back(std::move(*syl));
        }
      }
      if (readings.empty()) throw ParseError("no readings for " + key, line_no);
      table.set_char(key_chars.front(), std::move(readings));
    } else {
      if (fields.size() != 2) throw ParseError("expected <word>\\t<reading>", line_no);
      auto py = PinyinString::parse(fields[1]);
      if (!py) throw ParseError("invalid reading '" + fields[1] + "'", line_no);
      if (py->size() != key_chars.size()) {
        throw ParseError("reading of " + key + " has " + std::to_string(py->size()) + " syllables for " +
                             std::to_string(key_chars.size()) + " characters",
                         line_no);
      }
      table.set_word(key, std::move(*py));
    }
  }
  return table;
}

inline CharReadingTable load_reading_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open reading table: " + path);
  return parse_reading_table(in);
}

// Converts hanzi to pinyin, one syllable per code point. Known word readings
// are matched greedily (longest first) inside the word; remaining characters
// take their most frequent reading, and unknown ones become opaque syllables.
inline PinyinString to_pinyin(std::u32string_view word, const CharReadingTable& table) {
  PinyinString out;
  out.syllables.reserve(word.size());
  std::size_t i = 0;
  while (i < word.size()) {
    bool matched = false;
    const std::size_t longest = std::min(table.max_word_len(), word.size() - i);
    for (std::size_t len = longest; len >= 2; --len) {
      if (const PinyinString* reading = table.word_reading(utf8::encode(word.substr(i, len)))) {
        out.syllables.insert(out.syllables.end(), reading->syllables.begin(), reading->syllables.end());
        i += len;
        matched = true;
        break;
      }
    }
    if (matched) continue;
    const auto readings = table.readings(word[i]);
    out.syllables.push_back(readings.empty() ? make_opaque(word[i]) : readings.front());
    ++i;
  }
  return out;
}

inline PinyinString to_pinyin(std::string_view word, const CharReadingTable& table) {
  return to_pinyin(std::u32string_view(utf8::decode(word)), table);
}

// Equivalence classes over initials and over finals. Every member maps to the
// lexicographically smallest member of its class.
class FuzzyRules {
 public:
  using Classes = std::vector<std::vector<std::string>>;

  FuzzyRules() = default;

  static FuzzyRules defaults() {
    FuzzyRules rules;
    for (auto cls : Classes{{"zh", "z"}, {"ch", "c"}, {"sh", "s"}, {"n", "l"}, {"f", "h"}}) {
      rules.add_initial_class(std::move(cls));
    }
    for (auto cls : Classes{{"in", "ing"}, {"en", "eng"}, {"an", "ang"}}) {
      rules.add_final_class(std::move(cls));
    }
    return rules;
  }

  // Parses "zh z, ch c" style specs: classes separated by ',' and members by
  // whitespace. An empty spec yields no classes.
  static FuzzyRules parse(std::string_view initials, std::string_view finals) {
    FuzzyRules rules;
    for (auto& cls : parse_classes(initials)) rules.add_initial_class(std::move(cls));
    for (auto& cls : parse_classes(finals)) rules.add_final_class(std::move(cls));
    return rules;
  }

  void add_initial_class(std::vector<std::string> members) { add_class(initials_, initial_classes_, std::move(members)); }
  void add_final_class(std::vector<std::string> members) { add_class(finals_, final_classes_, std::move(members)); }

  const std::string& canonical_initial(const std::string& initial) const { return lookup(initials_, initial); }
  const std::string& canonical_final(const std::string& final) const { return lookup(finals_, final); }

  const Classes& initial_classes() const noexcept { return initial_classes_; }
  const Classes& final_classes() const noexcept { return final_classes_; }
  bool empty() const noexcept { return initial_classes_.empty() && final_classes_.empty(); }

  static std::string format_classes(const Classes& classes) {
    std::string out;
    for (const auto& cls : classes) {
      if (!out.empty()) out += ", ";
      for (std::size_t i = 0; i < cls.size(); ++i) {
        if (i) out.push_back(' ');
        out += cls[i];
      }
    }
    return out;
  }

 private:
  static Classes parse_classes(std::string_view spec) {
    Classes out;
    std::string group;
    std::istringstream groups{std::string(spec)};
    while (std::getline(groups, group, ',')) {
      std::istringstream members(group);
      std::vector<std::string> cls;
      std::string m;
      while (members >> m) cls.push_back(m);
      if (!cls.empty()) out.push_back(std::move(cls));
    }
    return out;
  }

  static void add_class(std::map<std::string, std::string>& canon, Classes& classes, std::vector<std::string> members) {
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    if (members.size() < 2) throw ConfigError("fuzzy class needs at least two members");
    for (const auto& m : members) {
      if (!detail::all_lower_alpha(m)) throw ConfigError("fuzzy class member must be lowercase letters: " + m);
      if (canon.contains(m)) throw ConfigError("fuzzy classes overlap on '" + m + "'");
    }
    for (const auto& m : members) canon.emplace(m, members.front());
    classes.push_back(std::move(members));
    std::sort(classes.begin(), classes.end());
  }

  static const std::string& lookup(const std::map<std::string, std::string>& canon, const std::string& key) {
    const auto it = canon.find(key);
    return it == canon.end() ? key : it->second;
  }

  std::map<std::string, std::string> initials_;
  std::map<std::string, std::string> finals_;
  Classes initial_classes_;
  Classes final_classes_;
};

inline Syllable normalize(const Syllable& s, const FuzzyRules& rules) {
  if (s.opaque) return s;
  Syllable out;
  out.initial = rules.canonical_initial(s.initial);
  out.final = rules.canonical_final(s.final);
  out.raw = out.initial + out.final;
  return out;
}

inline PinyinString normalize(const PinyinString& py, const FuzzyRules& rules) {
  PinyinString out;
  out.syllables.reserve(py.size());
  for (const auto& s : py.syllables) out.syllables.push_back(normalize(s, rules));
  return out;
}

// All syllable n-grams for n = 1..min(n_max, size), grouped by n and in
// order of position; multi-syllable tokens are joined with '_'.
inline std::vector<std::string> syllable_ngrams(const PinyinString& py, std::size_t n_max) {
  std::vector<std::string> out;
  const std::size_t len = py.size();
  for (std::size_t n = 1; n <= std::min(n_max, len); ++n) {
    for (std::size_t i = 0; i + n <= len; ++i) {
      std::string token = py.syllables[i].raw;
      for (std::size_t j = i + 1; j < i + n; ++j) {
        token.push_back('_');
        token += py.syllables[j].raw;
      }
      out.push_back(std::move(token));
    }
  }
  return out;
}

}  // namespace rspell
