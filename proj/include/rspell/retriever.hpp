#pragma once

#include <algorithm>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "rspell/lexicon_index.hpp"
#include "rspell/pinyin.hpp"
#include "rspell/segmenter.hpp"
#include "rspell/sentence.hpp"

namespace rspell {

inline constexpr std::string_view kDomainPrompt = "领域词是";
inline constexpr std::string_view kDefaultSeparator = "‖";  // U+2016
inline constexpr std::string_view kTermJoiner = "，";       // U+FF0C

struct PinyinQuery {
  std::string word;
  PinyinString py;  // normalized
};

struct PinyinQuerySet {
  std::vector<PinyinQuery> queries;
};

// Retrieved domain terms, duplicate-free, with the best score seen for each.
struct RetrievalResult {
  std::vector<std::string> terms;
  std::vector<double> per_term_score;

  std::size_t size() const noexcept { return terms.size(); }
  bool empty() const noexcept { return terms.empty(); }
};

struct AugmentedInput {
  SourceSentence source;
  std::vector<std::string> terms;
  std::string rendered;
};

// Everything retrieval reads; all of it is immutable once built.
struct RetrievalContext {
  const SegmentDict& dict;
  const CharReadingTable& table;
  const TfIdfIndex& index;
  RetrieverConfig config;
};

// One query per segmented word; punctuation and latin runs yield none.
inline PinyinQuerySet make_queries(const SourceSentence& sentence, const SegmentDict& dict,
                                   const CharReadingTable& table, const FuzzyRules& rules) {
  PinyinQuerySet set;
  for (const auto& tok : segment(std::u32string_view(sentence.chars), dict).words) {
    if (tok.kind != TokenKind::kWord) continue;
    const std::u32string_view chars = std::u32string_view(sentence.chars).substr(tok.begin, tok.length);
    set.queries.push_back({tok.text, normalize(to_pinyin(chars, table), rules)});
  }
  return set;
}

// Union of per-query matches. A term keeps its maximum score and is ordered
// by the first query that found it, then by score, then by entry id.
inline RetrievalResult retrieve(const SourceSentence& sentence, const RetrievalContext& ctx) {
  struct Hit {
    std::size_t first_query;
    double score;
    std::size_t entry_id;
  };
  std::unordered_map<std::string, Hit> hits;
  std::vector<std::string> order;
  const auto queries = make_queries(sentence, ctx.dict, ctx.table, ctx.config.fuzzy);
  for (std::size_t qi = 0; qi < queries.queries.size(); ++qi) {
    for (const auto& m : ctx.index.query(queries.queries[qi].py, ctx.config)) {
      auto [it, inserted] = hits.try_emplace(m.entry.word, Hit{qi, m.score, m.entry_id});
      if (inserted) {
        order.push_back(m.entry.word);
      } else {
        it->second.score = std::max(it->second.score, m.score);
      }
    }
  }
  std::stable_sort(order.begin(), order.end(), [&](const std::string& a, const std::string& b) {
    const Hit& x = hits.at(a);
    const Hit& y = hits.at(b);
    if (x.first_query != y.first_query) return x.first_query < y.first_query;
    if (x.score != y.score) return x.score > y.score;
    return x.entry_id < y.entry_id;
  });
  RetrievalResult result;
  for (auto& term : order) {
    result.per_term_score.push_back(hits.at(term).score);
    result.terms.push_back(std::move(term));
  }
  return result;
}

// Renders "<text><separator>领域词是<t1>，<t2>..." or the bare text when no
// term was retrieved.
inline AugmentedInput build_augmented(const SourceSentence& sentence, const RetrievalResult& r,
                                      std::string_view separator = kDefaultSeparator) {
  AugmentedInput out{sentence, r.terms, sentence.text};
  if (r.terms.empty()) return out;
  out.rendered += separator;
  out.rendered += kDomainPrompt;
  for (std::size_t i = 0; i < r.terms.size(); ++i) {
    if (i) out.rendered += kTermJoiner;
    out.rendered += r.terms[i];
  }
  return out;
}

}  // namespace rspell
