#pragma once

#include <algorithm>
#include <fstream>
#include <istream>
#include <string>
#include <unordered_map>
#include <vector>

#include "rspell/error.hpp"
#include "rspell/pinyin.hpp"
#include "rspell/utf8.hpp"

namespace rspell {

// Characters a writer may confuse with a given character. A character never
// lists itself.
class ConfusionSet {
 public:
  void add(char32_t c, char32_t confusable) {
    if (c == confusable) return;
    auto& list = map_[c];
    const auto it = std::lower_bound(list.begin(), list.end(), confusable);
    if (it == list.end() || *it != confusable) list.insert(it, confusable);
  }

  const std::vector<char32_t>& candidates(char32_t c) const {
    static const std::vector<char32_t> kNone;
    const auto it = map_.find(c);
    return it == map_.end() ? kNone : it->second;
  }

  std::size_t size() const noexcept { return map_.size(); }

  // "<char>\t<confusables as one contiguous string>" per line.
  static ConfusionSet parse(std::istream& in) {
    ConfusionSet cs;
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
      ++line_no;
      const std::string_view line = detail::chomp(raw);
      if (detail::trim(line).empty() || line.front() == '#') continue;
      const auto tab = line.find('\t');
      if (tab == std::string_view::npos) throw ParseError("expected <char>\\t<confusables>", line_no);
      const std::u32string key = utf8::decode(detail::trim(line.substr(0, tab)));
      if (key.size() != 1) throw ParseError("key must be a single character", line_no);
      for (char32_t c : utf8::decode(detail::trim(line.substr(tab + 1)))) cs.add(key.front(), c);
    }
    return cs;
  }

  static ConfusionSet load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open confusion set: " + path);
    return parse(in);
  }

  // Homophones: characters sharing any normalized reading. Only characters
  // accepted by admit() become candidates.
  template <typename Admit>
  static ConfusionSet from_homophones(const CharReadingTable& table, const FuzzyRules& rules, Admit admit) {
    std::unordered_map<std::string, std::vector<char32_t>> by_syllable;
    for (const auto& [c, readings] : table.char_map()) {
      if (!admit(c)) continue;
      for (const auto& r : readings) by_syllable[normalize(r, rules).raw].push_back(c);
    }
    ConfusionSet cs;
    for (const auto& [c, readings] : table.char_map()) {
      std::vector<char32_t> merged;
      for (const auto& r : readings) {
        const auto it = by_syllable.find(normalize(r, rules).raw);
        if (it != by_syllable.end()) merged.insert(merged.end(), it->second.begin(), it->second.end());
      }
      std::sort(merged.begin(), merged.end());
      merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
      merged.erase(std::remove(merged.begin(), merged.end(), c), merged.end());
      if (!merged.empty()) cs.map_.emplace(c, std::move(merged));
    }
    return cs;
  }

  static ConfusionSet from_homophones(const CharReadingTable& table, const FuzzyRules& rules) {
    return from_homophones(table, rules, [](char32_t) { return true; });
  }

 private:
  std::unordered_map<char32_t, std::vector<char32_t>> map_;
};

}  // namespace rspell
