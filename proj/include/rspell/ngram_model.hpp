#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "rspell/error.hpp"
#include "rspell/pinyin.hpp"
#include "rspell/utf8.hpp"

namespace rspell {

struct NGramParams {
  int order = 3;
  double k = 0.01;
  std::vector<double> lambdas{0.6, 0.3, 0.1};  // highest order first

  // Default weights for a lower order model.
  static NGramParams for_order(int order) {
    NGramParams p;
    p.order = order;
    if (order == 2) p.lambdas = {0.7, 0.3};
    if (order == 1) p.lambdas = {1.0};
    return p;
  }

  void validate() const {
    if (order < 1 || order > 3) throw ConfigError("n-gram order must be 1, 2 or 3");
    if (!(k > 0.0)) throw ConfigError("add-k constant must be positive");
    if (lambdas.size() != static_cast<std::size_t>(order)) {
      throw ConfigError("need one interpolation weight per order");
    }
    if (std::any_of(lambdas.begin(), lambdas.end(), [](double l) { return !(l >= 0.0); }) ||
        std::accumulate(lambdas.begin(), lambdas.end(), 0.0) <= 0.0) {
      throw ConfigError("interpolation weights must be non-negative and not all zero");
    }
  }
};

// Character n-gram model (order <= 3). Each order is an add-k estimate
//   P_n(c | h) = (count(h, c) + k) / (count(h) + k * (V + 1))
// where V is the observed vocabulary and the extra slot is the unknown-char
// mass. Orders are linearly interpolated; orders whose context never occurred
// drop out and the remaining weights are renormalized.
class NGramModel {
 public:
  using Params = NGramParams;

  static constexpr char32_t kBos = 0x110000;  // outside Unicode, fits 21 bits
  static constexpr int kFormatVersion = 1;

  NGramModel() : NGramModel(Params{}) {}
  explicit NGramModel(Params params) : params_(std::move(params)) {
    params_.validate();
    counts_.resize(params_.order);
    totals_.resize(params_.order);
  }

  static NGramModel train(std::istream& corpus, Params params = {}) {
    NGramModel lm(std::move(params));
    std::string line;
    while (std::getline(corpus, line)) lm.add_sentence(utf8::decode(detail::chomp(line)));
    return lm;
  }

  void add_sentence(std::u32string_view chars) {
    const int order = params_.order;
    std::u32string padded(static_cast<std::size_t>(order - 1), kBos);
    padded.append(chars);
    for (std::size_t pos = static_cast<std::size_t>(order - 1); pos < padded.size(); ++pos) {
      for (int n = 1; n <= order; ++n) {
        const std::u32string_view gram = std::u32string_view(padded).substr(pos + 1 - n, n);
        ++counts_[n - 1][pack(gram)];
        totals_[n - 1][pack(gram.substr(0, n - 1))] += 1;
      }
      if (padded[pos] != kBos) vocab_.emplace(padded[pos], 0).first->second += 1;
      ++tokens_;
    }
  }

  // Conditional probability of c after the given left context (only the last
  // order-1 characters matter; missing history is padded with BOS).
  double prob(std::u32string_view left, char32_t c) const {
    const int order = params_.order;
    std::u32string hist(static_cast<std::size_t>(order - 1), kBos);
    const std::size_t take = std::min(left.size(), static_cast<std::size_t>(order - 1));
    hist.replace(hist.size() - take, take, left.substr(left.size() - take));
    const double slots = static_cast<double>(vocab_.size() + 1);
    double num = 0.0;
    double weight = 0.0;
    for (int n = order; n >= 1; --n) {
      const std::u32string_view ctx = std::u32string_view(hist).substr(hist.size() - (n - 1));
      const auto tot = totals_[n - 1].find(pack(ctx));
      if (tot == totals_[n - 1].end() || tot->second == 0) continue;
      std::u32string gram(ctx);
      gram.push_back(c);
      const auto cnt = counts_[n - 1].find(pack(gram));
      const double count = cnt == counts_[n - 1].end() ? 0.0 : static_cast<double>(cnt->second);
      const double lambda = params_.lambdas[order - n];
      num += lambda * (count + params_.k) / (static_cast<double>(tot->second) + params_.k * slots);
      weight += lambda;
    }
    if (weight <= 0.0) return 1.0 / slots;
    return num / weight;
  }

  double log_prob(std::u32string_view left, char32_t c) const { return std::log(prob(left, c)); }

  bool in_vocab(char32_t c) const { return vocab_.contains(c); }
  std::vector<char32_t> vocab() const {
    std::vector<char32_t> out;
    out.reserve(vocab_.size());
    for (const auto& [c, _] : vocab_) out.push_back(c);
    std::sort(out.begin(), out.end());
    return out;
  }
  std::size_t vocab_size() const noexcept { return vocab_.size(); }
  std::uint64_t tokens() const noexcept { return tokens_; }
  const Params& params() const noexcept { return params_; }
  int order() const noexcept { return params_.order; }

  // Text artifact, version 1. N-gram lines are "<n> <cp,cp,...> <count>"
  // with hex code points (BOS = 110000), sorted so output is reproducible.
  void save(std::ostream& out) const {
    std::ostringstream head;
    head << std::setprecision(17);
    head << "rspell-lm " << kFormatVersion << '\n'
         << "order " << params_.order << '\n'
         << "k " << params_.k << '\n'
         << "lambdas";
    for (double l : params_.lambdas) head << ' ' << l;
    head << '\n' << "tokens " << tokens_ << '\n';
    out << head.str();
    for (int n = 1; n <= params_.order; ++n) {
      std::map<std::uint64_t, std::uint32_t> sorted(counts_[n - 1].begin(), counts_[n - 1].end());
      out << "ngrams " << n << ' ' << sorted.size() << '\n';
      for (const auto& [key, count] : sorted) {
        out << n << ' ';
        for (int i = n - 1; i >= 0; --i) {
          out << std::hex << ((key >> (21 * i)) & 0x1FFFFF) << std::dec << (i ? "," : "");
        }
        out << ' ' << count << '\n';
      }
    }
  }

  static NGramModel load(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    const auto next = [&](std::string_view key) {
      ++line_no;
      if (!std::getline(in, line)) throw ParseError("truncated language model", line_no);
      std::istringstream fields(line);
      std::string tag;
      fields >> tag;
      if (tag != key) throw ParseError("expected '" + std::string(key) + "'", line_no);
      std::string rest;
      std::getline(fields, rest);
      return std::string(detail::trim(rest));
    };
    if (next("rspell-lm") != std::to_string(kFormatVersion)) throw ParseError("unsupported model version", line_no);
    Params params;
    std::uint64_t tokens = 0;
    try {
      params.order = std::stoi(next("order"));
      params.k = std::stod(next("k"));
      std::istringstream ls(next("lambdas"));
      params.lambdas.clear();
      for (double l; ls >> l;) params.lambdas.push_back(l);
      tokens = std::stoull(next("tokens"));
    } catch (const std::logic_error&) {
      throw ParseError("bad model header value", line_no);
    }
    NGramModel lm(std::move(params));
    for (int n = 1; n <= lm.params_.order; ++n) {
      std::istringstream hs(next("ngrams"));
      int hn = 0;
      std::size_t count = 0;
      if (!(hs >> hn >> count) || hn != n) throw ParseError("bad n-gram block header", line_no);
      for (std::size_t i = 0; i < count; ++i) {
        ++line_no;
        if (!std::getline(in, line)) throw ParseError("truncated n-gram block", line_no);
        std::istringstream fs(line);
        int gn = 0;
        std::string cps;
        std::uint32_t c = 0;
        if (!(fs >> gn >> cps >> c) || gn != n) throw ParseError("bad n-gram line", line_no);
        std::u32string gram;
        std::istringstream cs(cps);
        for (std::string hex; std::getline(cs, hex, ',');) {
          gram.push_back(static_cast<char32_t>(std::stoul(hex, nullptr, 16)));
        }
        if (gram.size() != static_cast<std::size_t>(n)) throw ParseError("n-gram arity mismatch", line_no);
        lm.counts_[n - 1][pack(gram)] = c;
        lm.totals_[n - 1][pack(std::u32string_view(gram).substr(0, n - 1))] += c;
        if (n == 1) lm.vocab_[gram[0]] = c;
      }
    }
    lm.tokens_ = tokens;
    return lm;
  }

  static NGramModel load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open language model: " + path);
    return load(in);
  }

 private:
  static std::uint64_t pack(std::u32string_view chars) {
    std::uint64_t key = 0;
    for (char32_t c : chars) key = (key << 21) | (static_cast<std::uint64_t>(c) & 0x1FFFFF);
    return key;
  }

  Params params_;
  std::vector<std::unordered_map<std::uint64_t, std::uint32_t>> counts_;
  std::vector<std::unordered_map<std::uint64_t, std::uint64_t>> totals_;
  std::unordered_map<char32_t, std::uint64_t> vocab_;
  std::uint64_t tokens_ = 0;
};

}  // namespace rspell
