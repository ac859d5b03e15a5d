#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "rspell/error.hpp"
#include "rspell/pinyin.hpp"
#include "rspell/segmenter.hpp"

namespace rspell {

// A domain term (value) keyed by its normalized pinyin.
struct LexiconEntry {
  std::string word;
  PinyinString key;

  friend bool operator==(const LexiconEntry&, const LexiconEntry&) = default;
};

struct RetrieverConfig {
  double theta = 0.6;
  std::size_t ngram_max = 2;
  std::size_t top_k_per_query = 5;
  FuzzyRules fuzzy = FuzzyRules::defaults();

  void validate() const {
    if (!(theta >= 0.0 && theta <= 1.0)) throw ConfigError("theta must lie in [0, 1]");
    if (ngram_max < 1) throw ConfigError("ngram_max must be >= 1");
    if (top_k_per_query < 1) throw ConfigError("top_k_per_query must be >= 1");
  }

  // Covers the parameters that shape index vectors; theta and top_k are
  // query-time only.
  std::string build_params() const {
    return "tfidf-v1;ngram_max=" + std::to_string(ngram_max) +
           ";initials=" + FuzzyRules::format_classes(fuzzy.initial_classes()) +
           ";finals=" + FuzzyRules::format_classes(fuzzy.final_classes());
  }

  std::uint64_t fingerprint() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
    for (unsigned char c : build_params()) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    return h;
  }
};

struct MatchResult {
  std::size_t entry_id = 0;
  LexiconEntry entry;
  double score = 0.0;
};

using SparseVector = std::vector<std::pair<std::uint32_t, double>>;  // sorted by feature id

class TfIdfIndex {
 public:
  // Raw term frequency times idf(t) = ln((N+1)/(df+1)) + 1, L2-normalized.
  static TfIdfIndex build(std::vector<LexiconEntry> entries, const RetrieverConfig& config) {
    config.validate();
    if (entries.empty()) throw ContractError("cannot build an index from an empty lexicon");
    TfIdfIndex index;
    index.fingerprint_ = config.fingerprint();
    index.ngram_max_ = config.ngram_max;
    index.entries_ = std::move(entries);
    const std::size_t n = index.entries_.size();

    std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> counts(n);
    std::vector<std::uint32_t> df;
    for (std::size_t e = 0; e < n; ++e) {
      auto& entry = index.entries_[e];
      entry.key = normalize(entry.key, config.fuzzy);
      index.exact_[entry.key.text()].push_back(e);
      std::unordered_map<std::uint32_t, std::uint32_t> tf;
      for (auto& token : syllable_ngrams(entry.key, config.ngram_max)) {
        auto [it, inserted] = index.vocab_.try_emplace(std::move(token), static_cast<std::uint32_t>(df.size()));
        if (inserted) df.push_back(0);
        ++tf[it->second];
      }
      for (const auto& [id, _] : tf) ++df[id];
      counts[e].assign(tf.begin(), tf.end());
      std::sort(counts[e].begin(), counts[e].end());
    }

    index.idf_.resize(df.size());
    for (std::size_t id = 0; id < df.size(); ++id) {
      index.idf_[id] = std::log(static_cast<double>(n + 1) / static_cast<double>(df[id] + 1)) + 1.0;
    }
    index.postings_.resize(df.size());
    index.docs_.resize(n);
    for (std::size_t e = 0; e < n; ++e) {
      SparseVector& vec = index.docs_[e];
      double norm = 0.0;
      for (const auto& [id, tf] : counts[e]) {
        const double w = tf * index.idf_[id];
        vec.emplace_back(id, w);
        norm += w * w;
      }
      norm = std::sqrt(norm);
      for (auto& [id, w] : vec) {
        w /= norm;
        index.postings_[id].push_back(static_cast<std::uint32_t>(e));
      }
    }
    return index;
  }

  // Cosine similarity against every entry sharing a feature with q. Tokens
  // absent from the vocabulary carry no weight. An exact key match scores 1.
  std::vector<MatchResult> query(const PinyinString& q, const RetrieverConfig& config) const {
    if (config.fingerprint() != fingerprint_) {
      throw ConfigError("retriever configuration does not match the index build parameters");
    }
    config.validate();
    const PinyinString key = normalize(q, config.fuzzy);
    const SparseVector qvec = vectorize(key);
    std::vector<MatchResult> out;
    if (qvec.empty()) return out;

    std::unordered_map<std::uint32_t, double> acc;
    for (const auto& [id, qw] : qvec) {
      for (std::uint32_t e : postings_[id]) acc[e] += qw * weight(docs_[e], id);
    }
    if (const auto it = exact_.find(key.text()); it != exact_.end()) {
      for (std::size_t e : it->second) acc[static_cast<std::uint32_t>(e)] = 1.0;
    }
    for (const auto& [e, raw] : acc) {
      const double score = std::clamp(raw, 0.0, 1.0);
      if (score >= config.theta) out.push_back({e, entries_[e], score});
    }
    std::sort(out.begin(), out.end(), [](const MatchResult& a, const MatchResult& b) {
      return a.score != b.score ? a.score > b.score : a.entry_id < b.entry_id;
    });
    if (out.size() > config.top_k_per_query) out.resize(config.top_k_per_query);
    return out;
  }

  // Normalized tf-idf vector of an already-normalized key.
  SparseVector vectorize(const PinyinString& key) const {
    std::unordered_map<std::uint32_t, std::uint32_t> tf;
    for (const auto& token : syllable_ngrams(key, ngram_max_)) {
      if (const auto it = vocab_.find(token); it != vocab_.end()) ++tf[it->second];
    }
    SparseVector vec(tf.begin(), tf.end());
    std::sort(vec.begin(), vec.end());
    double norm = 0.0;
    for (auto& [id, w] : vec) {
      w = w * idf_[id];
      norm += w * w;
    }
    norm = std::sqrt(norm);
    for (auto& [id, w] : vec) w /= norm;
    return vec;
  }

  const std::vector<LexiconEntry>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  const std::unordered_map<std::string, std::uint32_t>& vocab() const noexcept { return vocab_; }
  double idf(std::uint32_t feature) const { return idf_.at(feature); }
  const SparseVector& doc_vector(std::size_t entry) const { return docs_.at(entry); }
  const std::vector<std::uint32_t>& postings(std::uint32_t feature) const { return postings_.at(feature); }
  std::size_t feature_count() const noexcept { return idf_.size(); }
  std::uint64_t fingerprint() const noexcept { return fingerprint_; }
  std::size_t ngram_max() const noexcept { return ngram_max_; }

 private:
  static double weight(const SparseVector& vec, std::uint32_t id) {
    const auto it = std::lower_bound(vec.begin(), vec.end(), id,
                                     [](const auto& p, std::uint32_t v) { return p.first < v; });
    return it != vec.end() && it->first == id ? it->second : 0.0;
  }

  std::vector<LexiconEntry> entries_;
  std::unordered_map<std::string, std::uint32_t> vocab_;
  std::vector<double> idf_;
  std::vector<SparseVector> docs_;
  std::vector<std::vector<std::uint32_t>> postings_;
  std::unordered_map<std::string, std::vector<std::size_t>> exact_;
  std::uint64_t fingerprint_ = 0;
  std::size_t ngram_max_ = 2;
};

inline TfIdfIndex build_index(std::vector<LexiconEntry> entries, const RetrieverConfig& config) {
  return TfIdfIndex::build(std::move(entries), config);
}

inline std::vector<MatchResult> query(const TfIdfIndex& index, const PinyinString& q, const RetrieverConfig& config) {
  return index.query(q, config);
}

// ---------------------------------------------------------------------------
// Lexicon files: "<word>" or "<word>\t<space-joined pinyin>" per line.

struct RejectedLine {
  std::size_t line = 0;
  std::string text;
  std::string reason;
};

struct LexiconLoad {
  std::vector<LexiconEntry> entries;
  std::vector<RejectedLine> rejected;
  std::size_t duplicates = 0;  // repeated words dropped (first occurrence wins)
};

inline LexiconLoad parse_lexicon(std::istream& in, const CharReadingTable& table, const FuzzyRules& rules) {
  LexiconLoad load;
  std::unordered_set<std::string> seen;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = detail::chomp(raw);
    if (detail::trim(line).empty() || detail::trim(line).front() == '#') continue;
    const auto tab = line.find('\t');
    const std::string word{detail::trim(line.substr(0, tab))};
    const std::u32string chars = utf8::decode(word);
    PinyinString key;
    if (tab != std::string_view::npos && !detail::trim(line.substr(tab + 1)).empty()) {
      auto explicit_py = PinyinString::parse(line.substr(tab + 1));
      if (!explicit_py) {
        load.rejected.push_back({line_no, std::string(line), "invalid pinyin"});
        continue;
      }
      if (explicit_py->size() != chars.size()) {
        load.rejected.push_back({line_no, std::string(line),
                                 "pinyin has " + std::to_string(explicit_py->size()) + " syllables for " +
                                     std::to_string(chars.size()) + " characters"});
        continue;
      }
      key = std::move(*explicit_py);
    } else {
      key = to_pinyin(std::u32string_view(chars), table);
    }
    if (!seen.insert(word).second) {
      ++load.duplicates;
      continue;
    }
    load.entries.push_back({word, normalize(key, rules)});
  }
  return load;
}

inline LexiconLoad ingest_lexicon(const std::string& path, const CharReadingTable& table, const FuzzyRules& rules) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open lexicon: " + path);
  return parse_lexicon(in, table, rules);
}

inline void write_lexicon(std::ostream& out, const std::vector<LexiconEntry>& entries) {
  for (const auto& e : entries) out << e.word << '\t' << e.key.text() << '\n';
}

// Adds frequent corpus words (by segmentation) that the base lexicon lacks.
// New entries follow the base in order of first occurrence in the corpus.
inline std::vector<LexiconEntry> expand_lexicon(std::istream& corpus, const std::vector<LexiconEntry>& base,
                                                const SegmentDict& dict, std::size_t min_freq, std::size_t min_len,
                                                const CharReadingTable& table, const FuzzyRules& rules) {
  std::vector<LexiconEntry> out;
  std::unordered_set<std::string> known;
  for (const auto& e : base) {
    if (known.insert(e.word).second) out.push_back(e);
  }
  std::vector<std::string> order;
  std::unordered_map<std::string, std::size_t> freq;
  std::string line;
  while (std::getline(corpus, line)) {
    for (const auto& tok : segment(detail::chomp(line), dict).words) {
      if (tok.kind != TokenKind::kWord || tok.length < min_len) continue;
      if (freq[tok.text]++ == 0) order.push_back(tok.text);
    }
  }
  for (const auto& word : order) {
    if (freq[word] < min_freq || !known.insert(word).second) continue;
    out.push_back({word, normalize(to_pinyin(std::string_view(word), table), rules)});
  }
  return out;
}

inline std::vector<LexiconEntry> expand_lexicon(const std::string& corpus_path, const std::vector<LexiconEntry>& base,
                                                const SegmentDict& dict, std::size_t min_freq, std::size_t min_len,
                                                const CharReadingTable& table, const FuzzyRules& rules) {
  std::ifstream in(corpus_path);
  if (!in) throw IoError("cannot open corpus: " + corpus_path);
  return expand_lexicon(in, base, dict, min_freq, min_len, table, rules);
}

// ---------------------------------------------------------------------------
// Index artifact (text, version 1):
//
//   rspell-index 1
//   fingerprint <16 hex digits>
//   ngram_max <n>
//   fuzzy_initials <classes>
//   fuzzy_finals <classes>
//   entries <count>
//   <word>\t<normalized key>      (count lines, entry-id order)
//
// Loading rebuilds vectors and postings from the entries, which is exact
// because building is deterministic, and then re-checks the fingerprint.

inline constexpr int kIndexFormatVersion = 1;

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

inline void save_index(std::ostream& out, const TfIdfIndex& index, const RetrieverConfig& config) {
  if (config.fingerprint() != index.fingerprint()) throw ConfigError("configuration does not match index");
  out << "rspell-index " << kIndexFormatVersion << '\n'
      << "fingerprint " << hex64(index.fingerprint()) << '\n'
      << "ngram_max " << config.ngram_max << '\n'
      << "fuzzy_initials " << FuzzyRules::format_classes(config.fuzzy.initial_classes()) << '\n'
      << "fuzzy_finals " << FuzzyRules::format_classes(config.fuzzy.final_classes()) << '\n'
      << "entries " << index.size() << '\n';
  write_lexicon(out, index.entries());
}

struct LoadedIndex {
  TfIdfIndex index;
  RetrieverConfig config;  // build parameters from the artifact; theta/top_k at defaults
};

inline LoadedIndex load_index(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  const auto header = [&](std::string_view key) {
    ++line_no;
    if (!std::getline(in, line)) throw ParseError("truncated index header", line_no);
    const std::string_view l = detail::chomp(line);
    if (!l.starts_with(key) || (l.size() > key.size() && l[key.size()] != ' ')) {
      throw ParseError("expected '" + std::string(key) + "'", line_no);
    }
    return std::string(l.size() > key.size() ? l.substr(key.size() + 1) : std::string_view{});
  };
  if (header("rspell-index") != std::to_string(kIndexFormatVersion)) {
    throw ParseError("unsupported index format version", line_no);
  }
  const std::string fp = header("fingerprint");
  RetrieverConfig config;
  try {
    config.ngram_max = std::stoul(header("ngram_max"));
  } catch (const std::logic_error&) {
    throw ParseError("bad ngram_max", line_no);
  }
  const std::string initials = header("fuzzy_initials");
  const std::string finals = header("fuzzy_finals");
  config.fuzzy = FuzzyRules::parse(initials, finals);
  std::size_t count = 0;
  try {
    count = std::stoul(header("entries"));
  } catch (const std::logic_error&) {
    throw ParseError("bad entry count", line_no);
  }
  std::vector<LexiconEntry> entries;
  entries.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    ++line_no;
    if (!std::getline(in, line)) throw ParseError("truncated entry list", line_no);
    const std::string_view l = detail::chomp(line);
    const auto tab = l.find('\t');
    if (tab == std::string_view::npos) throw ParseError("expected <word>\\t<key>", line_no);
    const std::string word{l.substr(0, tab)};
    PinyinString key;
    std::istringstream parts{std::string(l.substr(tab + 1))};
    std::string part;
    while (parts >> part) {
      // Stored keys are tone-less; anything else is an opaque character.
      if (auto syl = parse_syllable(part)) {
        key.syllables.push_back(std::move(*syl));
        continue;
      }
      const std::u32string cps = utf8::decode(part);
      if (cps.size() != 1) throw ParseError("invalid key for " + word, line_no);
      key.syllables.push_back(make_opaque(cps.front()));
    }
    entries.push_back({word, std::move(key)});
  }
  if (hex64(config.fingerprint()) != fp) throw ParseError("index fingerprint does not match its parameters");
  return {TfIdfIndex::build(std::move(entries), config), config};
}

inline LoadedIndex load_index(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open index: " + path);
  return load_index(in);
}

}  // namespace rspell
