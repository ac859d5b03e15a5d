#pragma once

#include <algorithm>
#include <fstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "rspell/error.hpp"
#include "rspell/pinyin.hpp"
#include "rspell/utf8.hpp"

namespace rspell {

class SegmentDict {
 public:
  void insert(std::u32string_view word) {
    if (word.empty()) return;
    if (words_.emplace(word).second) max_word_len_ = std::max(max_word_len_, word.size());
  }
  void insert(std::string_view word) { insert(std::u32string_view(utf8::decode(word))); }

  bool contains(const std::u32string& word) const { return words_.contains(word); }
  bool contains(std::string_view word) const { return words_.contains(utf8::decode(word)); }

  std::size_t size() const noexcept { return words_.size(); }
  bool empty() const noexcept { return words_.empty(); }
  std::size_t max_word_len() const noexcept { return max_word_len_; }

 private:
  std::unordered_set<std::u32string> words_;
  std::size_t max_word_len_ = 0;
};

template <typename Range>
SegmentDict build_segment_dict(const Range& entries) {
  SegmentDict dict;
  for (const auto& word : entries) dict.insert(std::string_view(word));
  return dict;
}

inline SegmentDict build_segment_dict(std::initializer_list<std::string_view> entries) {
  SegmentDict dict;
  for (auto word : entries) dict.insert(word);
  return dict;
}

// One word per line; blank lines and '#' comments are skipped.
inline std::vector<std::string> load_word_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open word list: " + path);
  std::vector<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    const std::string_view w = detail::trim(line);
    if (w.empty() || w.front() == '#') continue;
    words.emplace_back(w);
  }
  return words;
}

enum class TokenKind { kWord, kPunct, kLatin };

struct Token {
  std::string text;
  TokenKind kind = TokenKind::kWord;
  std::size_t begin = 0;  // code-point offset into the sentence
  std::size_t length = 0;

  friend bool operator==(const Token&, const Token&) = default;
};

struct Segmentation {
  std::vector<Token> words;

  std::vector<std::string> texts() const {
    std::vector<std::string> out;
    out.reserve(words.size());
    for (const auto& w : words) out.push_back(w.text);
    return out;
  }

  std::string joined() const {
    std::string out;
    for (const auto& w : words) out += w.text;
    return out;
  }
};

namespace detail {

// Word boundaries as (offset, length) pairs within one run of word characters.
using Cover = std::vector<std::pair<std::size_t, std::size_t>>;

inline Cover forward_max_match(std::u32string_view run, const SegmentDict& dict) {
  Cover cover;
  std::size_t i = 0;
  std::u32string probe;
  while (i < run.size()) {
    std::size_t take = 1;
    for (std::size_t len = std::min(dict.max_word_len(), run.size() - i); len >= 2; --len) {
      probe.assign(run.substr(i, len));
      if (dict.contains(probe)) {
        take = len;
        break;
      }
    }
    cover.emplace_back(i, take);
    i += take;
  }
  return cover;
}

inline Cover backward_max_match(std::u32string_view run, const SegmentDict& dict) {
  Cover cover;
  std::size_t j = run.size();
  std::u32string probe;
  while (j > 0) {
    std::size_t take = 1;
    for (std::size_t len = std::min(dict.max_word_len(), j); len >= 2; --len) {
      probe.assign(run.substr(j - len, len));
      if (dict.contains(probe)) {
        take = len;
        break;
      }
    }
    cover.emplace_back(j - take, take);
    j -= take;
  }
  std::reverse(cover.begin(), cover.end());
  return cover;
}

inline std::size_t singles(const Cover& cover) {
  return static_cast<std::size_t>(
      std::count_if(cover.begin(), cover.end(), [](const auto& w) { return w.second == 1; }));
}

}  // namespace detail

// Bidirectional maximum matching over each run of word characters: the cover
// with fewer words wins, then fewer single-character words, then forward.
// Each non-ASCII punctuation mark and each maximal latin run is its own token.
inline Segmentation segment(std::u32string_view text, const SegmentDict& dict) {
  Segmentation seg;
  std::size_t i = 0;
  while (i < text.size()) {
    const char32_t c = text[i];
    if (utf8::is_punct(c)) {
      seg.words.push_back({utf8::encode(c), TokenKind::kPunct, i, 1});
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    if (utf8::is_latin(c)) {
      while (j < text.size() && utf8::is_latin(text[j])) ++j;
      seg.words.push_back({utf8::encode(text.substr(i, j - i)), TokenKind::kLatin, i, j - i});
      i = j;
      continue;
    }
    while (j < text.size() && utf8::is_word_char(text[j])) ++j;
    const std::u32string_view run = text.substr(i, j - i);
    const auto fwd = detail::forward_max_match(run, dict);
    const auto bwd = detail::backward_max_match(run, dict);
    bool use_bwd = false;
    if (bwd.size() != fwd.size()) {
      use_bwd = bwd.size() < fwd.size();
    } else {
      use_bwd = detail::singles(bwd) < detail::singles(fwd);
    }
    for (const auto& [off, len] : use_bwd ? bwd : fwd) {
      seg.words.push_back({utf8::encode(run.substr(off, len)), TokenKind::kWord, i + off, len});
    }
    i = j;
  }
  return seg;
}

inline Segmentation segment(std::string_view text, const SegmentDict& dict) {
  return segment(std::u32string_view(utf8::decode(text)), dict);
}

}  // namespace rspell
