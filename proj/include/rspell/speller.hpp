#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "rspell/confusion_set.hpp"
#include "rspell/error.hpp"
#include "rspell/ngram_model.hpp"
#include "rspell/pinyin.hpp"
#include "rspell/retriever.hpp"
#include "rspell/sentence.hpp"

namespace rspell {

struct Candidate {
  char32_t ch = 0;
  double log_prob = 0.0;
};

// Per-position distributions over a sparse candidate set. Every position's
// candidates include the original character.
struct TokenDistributionMatrix {
  std::u32string original;
  std::vector<std::vector<Candidate>> positions;

  std::size_t size() const noexcept { return positions.size(); }

  double log_prob(std::size_t pos, char32_t c) const {
    for (const auto& cand : positions.at(pos)) {
      if (cand.ch == c) return cand.log_prob;
    }
    return -std::numeric_limits<double>::infinity();
  }

  double prob(std::size_t pos, char32_t c) const { return std::exp(log_prob(pos, c)); }

  // Softmax of raw scores at every position.
  static TokenDistributionMatrix from_scores(std::u32string original,
                                             const std::vector<std::vector<std::pair<char32_t, double>>>& scores) {
    if (scores.size() != original.size()) throw ContractError("one score list per position required");
    TokenDistributionMatrix m{std::move(original), {}};
    m.positions.reserve(scores.size());
    for (const auto& pos : scores) {
      double top = -std::numeric_limits<double>::infinity();
      for (const auto& [_, s] : pos) top = std::max(top, s);
      double sum = 0.0;
      for (const auto& [_, s] : pos) sum += std::exp(s - top);
      const double log_z = top + std::log(sum);
      std::vector<Candidate> cands;
      cands.reserve(pos.size());
      for (const auto& [c, s] : pos) cands.push_back({c, s - log_z});
      m.positions.push_back(std::move(cands));
    }
    return m;
  }

  // Probability 1 on chosen[i] at every position.
  static TokenDistributionMatrix one_hot(std::u32string original, std::u32string_view chosen) {
    if (chosen.size() != original.size()) throw ContractError("one-hot target length mismatch");
    TokenDistributionMatrix m{std::move(original), {}};
    for (std::size_t i = 0; i < chosen.size(); ++i) {
      std::vector<Candidate> cands{{chosen[i], 0.0}};
      if (chosen[i] != m.original[i]) cands.push_back({m.original[i], -std::numeric_limits<double>::infinity()});
      m.positions.push_back(std::move(cands));
    }
    return m;
  }

  void validate(double tolerance = 1e-6) const {
    if (positions.size() != original.size()) throw ContractError("matrix length differs from its source");
    for (std::size_t i = 0; i < positions.size(); ++i) {
      double sum = 0.0;
      bool has_original = false;
      for (const auto& c : positions[i]) {
        sum += std::exp(c.log_prob);
        has_original = has_original || c.ch == original[i];
      }
      if (!has_original) throw ContractError("position " + std::to_string(i) + " lacks the original character");
      if (std::abs(sum - 1.0) > tolerance) {
        throw ContractError("position " + std::to_string(i) + " probabilities sum to " + std::to_string(sum));
      }
    }
  }
};

struct SpellerWeights {
  double lm = 1.0;
  double channel = 2.0;    // penalty per changed character
  double retrieval = 3.0;  // bonus for candidates backed by a retrieved term
};

struct CorrectionResult {
  SourceSentence source;
  std::string output;
  std::vector<std::size_t> changed_positions;
  std::vector<RetrievalResult> per_pass_terms;
};

// Any speller plugs into the pipeline through this interface.
class Speller {
 public:
  virtual ~Speller() = default;
  virtual TokenDistributionMatrix predict(const SourceSentence& sentence, const RetrievalResult& r) const = 0;
};

// For every retrieved term, every offset where the term's pinyin matches the
// sentence syllable-for-syllable contributes the term's characters as
// candidates at the covered positions. A sentence character matches when any
// of its readings normalizes to the term's syllable, or when the characters
// are identical.
inline std::vector<std::vector<char32_t>> align_retrieved_terms(const SourceSentence& sentence,
                                                                const RetrievalResult& r,
                                                                const CharReadingTable& table,
                                                                const FuzzyRules& rules) {
  const std::size_t n = sentence.size();
  std::vector<std::vector<char32_t>> out(n);
  if (r.empty() || n == 0) return out;

  std::vector<std::vector<std::string>> readings(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& syl : table.readings(sentence.chars[i])) readings[i].push_back(normalize(syl, rules).raw);
  }
  for (const auto& term : r.terms) {
    const std::u32string chars = utf8::decode(term);
    if (chars.empty() || chars.size() > n) continue;
    const PinyinString key = normalize(to_pinyin(std::u32string_view(chars), table), rules);
    for (std::size_t off = 0; off + chars.size() <= n; ++off) {
      bool match = true;
      for (std::size_t j = 0; match && j < chars.size(); ++j) {
        const auto& options = readings[off + j];
        match = chars[j] == sentence.chars[off + j] ||
                (!key.syllables[j].opaque &&
                 std::find(options.begin(), options.end(), key.syllables[j].raw) != options.end());
      }
      if (!match) continue;
      for (std::size_t j = 0; j < chars.size(); ++j) out[off + j].push_back(chars[j]);
    }
  }
  for (auto& cands : out) {
    std::sort(cands.begin(), cands.end());
    cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
  }
  return out;
}

// LM log-probability of the predictions that depend on position i when the
// character there is replaced by c: c itself given its left context, plus
// the following order-1 characters given histories that include c.
inline double window_log_prob(const NGramModel& lm, std::u32string_view chars, std::size_t i, char32_t c) {
  const std::size_t hist = static_cast<std::size_t>(lm.order() - 1);
  const std::size_t from = i > hist ? i - hist : 0;
  const std::size_t to = std::min(chars.size(), i + hist + 1);
  std::u32string window(chars.substr(from, to - from));
  window[i - from] = c;
  double total = 0.0;
  for (std::size_t j = i; j < to; ++j) {
    total += lm.log_prob(std::u32string_view(window).substr(0, j - from), window[j - from]);
  }
  return total;
}

// Noisy-channel scoring of {original} + confusables + aligned retrieval
// candidates:
//   w_lm * window_log_prob(c) - w_channel * [c != original]
//   + w_retrieval * [c aligned from a retrieved term]
// followed by a softmax per position.
inline TokenDistributionMatrix baseline_predict(const SourceSentence& sentence, const RetrievalResult& r,
                                                const ConfusionSet& cs, const NGramModel& lm,
                                                const SpellerWeights& weights, const CharReadingTable& table,
                                                const FuzzyRules& rules) {
  const auto aligned = align_retrieved_terms(sentence, r, table, rules);
  const std::u32string_view chars(sentence.chars);
  std::vector<std::vector<std::pair<char32_t, double>>> scores(chars.size());
  std::vector<char32_t> cands;
  for (std::size_t i = 0; i < chars.size(); ++i) {
    const char32_t orig = chars[i];
    const auto& confusable = cs.candidates(orig);
    cands.assign(1, orig);
    cands.insert(cands.end(), confusable.begin(), confusable.end());
    cands.insert(cands.end(), aligned[i].begin(), aligned[i].end());
    std::sort(cands.begin(), cands.end());
    cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
    for (char32_t c : cands) {
      double s = weights.lm * window_log_prob(lm, chars, i, c);
      if (c != orig) s -= weights.channel;
      if (std::binary_search(aligned[i].begin(), aligned[i].end(), c)) s += weights.retrieval;
      scores[i].emplace_back(c, s);
    }
  }
  return TokenDistributionMatrix::from_scores(sentence.chars, scores);
}

class BaselineSpeller final : public Speller {
 public:
  BaselineSpeller(const CharReadingTable& table, FuzzyRules rules, const ConfusionSet& cs, const NGramModel& lm,
                  SpellerWeights weights = {})
      : table_(table), rules_(std::move(rules)), cs_(cs), lm_(lm), weights_(weights) {}

  TokenDistributionMatrix predict(const SourceSentence& sentence, const RetrievalResult& r) const override {
    return baseline_predict(sentence, r, cs_, lm_, weights_, table_, rules_);
  }

  const SpellerWeights& weights() const noexcept { return weights_; }

 private:
  const CharReadingTable& table_;
  FuzzyRules rules_;
  const ConfusionSet& cs_;
  const NGramModel& lm_;
  SpellerWeights weights_;
};

// Argmax per position; ties keep the original, then the lowest code point.
inline std::string decode(const TokenDistributionMatrix& m) {
  std::u32string out;
  out.reserve(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    const char32_t orig = i < m.original.size() ? m.original[i] : 0;
    const Candidate* best = nullptr;
    for (const auto& c : m.positions[i]) {
      if (!best || c.log_prob > best->log_prob) {
        best = &c;
      } else if (c.log_prob == best->log_prob && best->ch != orig && (c.ch == orig || c.ch < best->ch)) {
        best = &c;
      }
    }
    out.push_back(best ? best->ch : orig);
  }
  return utf8::encode(out);
}

}  // namespace rspell
