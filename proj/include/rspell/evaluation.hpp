#pragma once

#include <cstdio>
#include <istream>
#include <span>
#include <string>
#include <vector>

#include "rspell/error.hpp"
#include "rspell/pinyin.hpp"
#include "rspell/utf8.hpp"

namespace rspell {

struct EvalPair {
  std::string source;
  std::string gold;
  std::string pred;
};

struct Metrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;

  friend bool operator==(const Metrics&, const Metrics&) = default;
};

struct EvalCounts {
  std::size_t total = 0;
  std::size_t gold_error_sents = 0;
  std::size_t pred_flagged_sents = 0;
  std::size_t detect_hits = 0;
  std::size_t correct_hits = 0;

  EvalCounts& operator+=(const EvalCounts& o) {
    total += o.total;
    gold_error_sents += o.gold_error_sents;
    pred_flagged_sents += o.pred_flagged_sents;
    detect_hits += o.detect_hits;
    correct_hits += o.correct_hits;
    return *this;
  }
  friend bool operator==(const EvalCounts&, const EvalCounts&) = default;
};

struct EvalReport {
  Metrics detection;
  Metrics correction;
  EvalCounts counts;

  friend bool operator==(const EvalReport&, const EvalReport&) = default;
};

inline std::vector<std::size_t> detect_positions(std::u32string_view a, std::u32string_view b) {
  if (a.size() != b.size()) throw ContractError("cannot diff strings of different lengths");
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) out.push_back(i);
  }
  return out;
}

inline std::vector<std::size_t> detect_positions(std::string_view a, std::string_view b) {
  return detect_positions(std::u32string_view(utf8::decode(a)), std::u32string_view(utf8::decode(b)));
}

// Sentence-level counts for one pair. Detection needs the changed positions
// to equal the gold error positions exactly; correction also needs the
// predicted sentence to equal the gold sentence.
inline EvalCounts count_pair(const EvalPair& p) {
  const std::u32string src = utf8::decode(p.source);
  const std::u32string gold = utf8::decode(p.gold);
  const std::u32string pred = utf8::decode(p.pred);
  const auto gold_pos = detect_positions(std::u32string_view(src), gold);
  const auto pred_pos = detect_positions(std::u32string_view(src), pred);
  EvalCounts c;
  c.total = 1;
  c.gold_error_sents = gold_pos.empty() ? 0 : 1;
  c.pred_flagged_sents = pred_pos.empty() ? 0 : 1;
  if (!pred_pos.empty() && pred_pos == gold_pos) {
    c.detect_hits = 1;
    c.correct_hits = pred == gold ? 1 : 0;
  }
  return c;
}

inline Metrics make_metrics(std::size_t hits, std::size_t flagged, std::size_t gold) {
  Metrics m;
  m.precision = flagged ? static_cast<double>(hits) / static_cast<double>(flagged) : 0.0;
  m.recall = gold ? static_cast<double>(hits) / static_cast<double>(gold) : 0.0;
  m.f1 = m.precision + m.recall > 0.0 ? 2.0 * m.precision * m.recall / (m.precision + m.recall) : 0.0;
  return m;
}

inline EvalReport make_report(const EvalCounts& c) {
  return {make_metrics(c.detect_hits, c.pred_flagged_sents, c.gold_error_sents),
          make_metrics(c.correct_hits, c.pred_flagged_sents, c.gold_error_sents), c};
}

inline EvalReport evaluate(std::span<const EvalPair> pairs) {
  EvalCounts counts;
  for (const auto& p : pairs) counts += count_pair(p);
  return make_report(counts);
}

// Machine-readable "key=value" lines.
inline std::string format_report_kv(const EvalReport& r) {
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "total=%zu\ngold_error_sents=%zu\npred_flagged_sents=%zu\ndetect_hits=%zu\ncorrect_hits=%zu\n"
                "detection.precision=%.6f\ndetection.recall=%.6f\ndetection.f1=%.6f\n"
                "correction.precision=%.6f\ncorrection.recall=%.6f\ncorrection.f1=%.6f\n",
                r.counts.total, r.counts.gold_error_sents, r.counts.pred_flagged_sents, r.counts.detect_hits,
                r.counts.correct_hits, r.detection.precision, r.detection.recall, r.detection.f1,
                r.correction.precision, r.correction.recall, r.correction.f1);
  return buf;
}

inline std::string format_report_table(const EvalReport& r) {
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "level        precision  recall   f1\n"
                "detection    %9.4f  %6.4f  %6.4f\n"
                "correction   %9.4f  %6.4f  %6.4f\n",
                r.detection.precision, r.detection.recall, r.detection.f1, r.correction.precision,
                r.correction.recall, r.correction.f1);
  return buf;
}

// "<source>\t<gold>\t<pred>" per line.
inline std::vector<EvalPair> parse_eval_triples(std::istream& in) {
  std::vector<EvalPair> pairs;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = detail::chomp(raw);
    if (line.empty()) continue;
    const auto f = detail::split_tabs(line);
    if (f.size() != 3) throw ParseError("expected <source>\\t<gold>\\t<pred>", line_no);
    if (utf8::length(f[0]) != utf8::length(f[1]) || utf8::length(f[0]) != utf8::length(f[2])) {
      throw ParseError("source, gold and prediction differ in length", line_no);
    }
    pairs.push_back({f[0], f[1], f[2]});
  }
  return pairs;
}

// Joins a prediction file ("<source>\t<pred>") with a dataset file
// ("<source>\t<gold>") line by line.
inline std::vector<EvalPair> join_predictions(std::istream& pred, std::istream& gold) {
  const auto read_pairs = [](std::istream& in, const char* what) {
    std::vector<std::pair<std::string, std::string>> rows;
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
      ++line_no;
      const std::string_view line = detail::chomp(raw);
      if (line.empty()) continue;
      const auto f = detail::split_tabs(line);
      if (f.size() != 2) throw ParseError(std::string(what) + ": expected two tab-separated fields", line_no);
      rows.emplace_back(f[0], f[1]);
    }
    return rows;
  };
  const auto p = read_pairs(pred, "predictions");
  const auto g = read_pairs(gold, "gold");
  if (p.size() != g.size()) {
    throw ParseError("prediction and gold files have " + std::to_string(p.size()) + " and " +
                     std::to_string(g.size()) + " lines");
  }
  std::vector<EvalPair> pairs;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i].first != g[i].first) throw ParseError("source sentences differ", i + 1);
    if (utf8::length(p[i].first) != utf8::length(p[i].second) ||
        utf8::length(g[i].first) != utf8::length(g[i].second)) {
      throw ParseError("sentence lengths differ", i + 1);
    }
    pairs.push_back({g[i].first, g[i].second, p[i].second});
  }
  return pairs;
}

}  // namespace rspell
