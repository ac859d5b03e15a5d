#pragma once

#include <string>
#include <utility>

#include "rspell/utf8.hpp"

namespace rspell {

// A sentence as both UTF-8 text and code points; the tag keeps source and
// target sentences from being mixed up at call sites.
template <typename Tag>
struct BasicSentence {
  std::string text;
  std::u32string chars;

  BasicSentence() = default;
  explicit BasicSentence(std::string t) : text(std::move(t)), chars(utf8::decode(text)) {}
  explicit BasicSentence(std::u32string c) : text(utf8::encode(c)), chars(std::move(c)) {}

  std::size_t size() const noexcept { return chars.size(); }
  bool empty() const noexcept { return chars.empty(); }

  friend bool operator==(const BasicSentence& a, const BasicSentence& b) { return a.text == b.text; }
};

using SourceSentence = BasicSentence<struct SourceTag>;
using TargetSentence = BasicSentence<struct TargetTag>;

}  // namespace rspell
