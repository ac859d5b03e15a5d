#pragma once

#include <charconv>
#include <filesystem>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <sstream>
#include <string>

#include "rspell/error.hpp"
#include "rspell/lexicon_index.hpp"
#include "rspell/pipeline.hpp"

namespace rspell {

inline constexpr const char* kConfigEnvVar = "RSPELL_CONFIG";

// Settings shared by the command-line tools. The file form is flat
// "key = value" lines with '#' comments; keys are listed by print().
struct ToolConfig {
  std::string readings;
  std::string lexicon;
  std::string index;
  std::string lm;
  std::string confusion;
  std::string words;

  double theta = 0.6;
  std::size_t ngram_max = 2;
  std::size_t top_k = 5;
  std::string fuzzy_initials = "zh z, ch c, sh s, n l, f h";
  std::string fuzzy_finals = "in ing, en eng, an ang";

  bool use_retrieval = true;
  bool use_secondary_search = true;
  SpellerWeights weights;
  std::string separator{kDefaultSeparator};

  RetrieverConfig retriever_config() const {
    RetrieverConfig c;
    c.theta = theta;
    c.ngram_max = ngram_max;
    c.top_k_per_query = top_k;
    c.fuzzy = FuzzyRules::parse(fuzzy_initials, fuzzy_finals);
    c.validate();
    return c;
  }

  PipelineConfig pipeline_config() const {
    PipelineConfig p;
    p.use_retrieval = use_retrieval;
    p.use_secondary_search = use_secondary_search;
    p.retriever = retriever_config();
    p.weights = weights;
    p.validate();
    return p;
  }

  void set(const std::string& key, const std::string& value) {
    const auto it = setters().find(key);
    if (it == setters().end()) throw ConfigError("unknown configuration key: " + key);
    try {
      it->second(*this, value);
    } catch (const std::logic_error&) {
      throw ConfigError("bad value for " + key + ": " + value);
    }
  }

  // Relative paths.* values are resolved against base when it is given.
  void merge(std::istream& in, const std::filesystem::path& base = {}) {
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
      ++line_no;
      const std::string_view line = detail::trim(raw);
      if (line.empty() || line.front() == '#') continue;
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) throw ParseError("expected key = value", line_no);
      const std::string key(detail::trim(line.substr(0, eq)));
      std::string value(detail::trim(line.substr(eq + 1)));
      if (key.starts_with("paths.") && !value.empty() && !base.empty() && std::filesystem::path(value).is_relative()) {
        value = (base / value).lexically_normal().string();
      }
      set(key, value);
    }
  }

  void merge_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    merge(in, std::filesystem::path(path).parent_path());
  }

  std::string print() const {
    const auto num = [](double v) {
      char buf[32];
      return std::string(buf, std::to_chars(buf, buf + sizeof buf, v).ptr);
    };
    std::ostringstream out;
    out << "paths.readings = " << readings << '\n'
        << "paths.lexicon = " << lexicon << '\n'
        << "paths.index = " << index << '\n'
        << "paths.lm = " << lm << '\n'
        << "paths.confusion = " << confusion << '\n'
        << "paths.words = " << words << '\n'
        << "retriever.theta = " << num(theta) << '\n'
        << "retriever.ngram_max = " << ngram_max << '\n'
        << "retriever.top_k = " << top_k << '\n'
        << "retriever.fuzzy_initials = " << fuzzy_initials << '\n'
        << "retriever.fuzzy_finals = " << fuzzy_finals << '\n'
        << "pipeline.retrieval = " << (use_retrieval ? "true" : "false") << '\n'
        << "pipeline.secondary_search = " << (use_secondary_search ? "true" : "false") << '\n'
        << "speller.w_lm = " << num(weights.lm) << '\n'
        << "speller.w_channel = " << num(weights.channel) << '\n'
        << "speller.w_retrieval = " << num(weights.retrieval) << '\n'
        << "prompt.separator = " << separator << '\n';
    return out.str();
  }

 private:
  using Setter = std::function<void(ToolConfig&, const std::string&)>;

  static bool parse_bool(const std::string& v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw std::invalid_argument(v);
  }

  static std::size_t parse_size(const std::string& v) {
    std::size_t used = 0;
    const long long n = std::stoll(v, &used);
    if (used != v.size() || n < 0) throw std::invalid_argument(v);
    return static_cast<std::size_t>(n);
  }

  static double parse_double(const std::string& v) {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  }

  static const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = {
        {"paths.readings", [](ToolConfig& c, const std::string& v) { c.readings = v; }},
        {"paths.lexicon", [](ToolConfig& c, const std::string& v) { c.lexicon = v; }},
        {"paths.index", [](ToolConfig& c, const std::string& v) { c.index = v; }},
        {"paths.lm", [](ToolConfig& c, const std::string& v) { c.lm = v; }},
        {"paths.confusion", [](ToolConfig& c, const std::string& v) { c.confusion = v; }},
        {"paths.words", [](ToolConfig& c, const std::string& v) { c.words = v; }},
        {"retriever.theta", [](ToolConfig& c, const std::string& v) { c.theta = parse_double(v); }},
        {"retriever.ngram_max", [](ToolConfig& c, const std::string& v) { c.ngram_max = parse_size(v); }},
        {"retriever.top_k", [](ToolConfig& c, const std::string& v) { c.top_k = parse_size(v); }},
        {"retriever.fuzzy_initials", [](ToolConfig& c, const std::string& v) { c.fuzzy_initials = v; }},
        {"retriever.fuzzy_finals", [](ToolConfig& c, const std::string& v) { c.fuzzy_finals = v; }},
        {"pipeline.retrieval", [](ToolConfig& c, const std::string& v) { c.use_retrieval = parse_bool(v); }},
        {"pipeline.secondary_search",
         [](ToolConfig& c, const std::string& v) { c.use_secondary_search = parse_bool(v); }},
        {"speller.w_lm", [](ToolConfig& c, const std::string& v) { c.weights.lm = parse_double(v); }},
        {"speller.w_channel", [](ToolConfig& c, const std::string& v) { c.weights.channel = parse_double(v); }},
        {"speller.w_retrieval", [](ToolConfig& c, const std::string& v) { c.weights.retrieval = parse_double(v); }},
        {"prompt.separator", [](ToolConfig& c, const std::string& v) { c.separator = v; }},
    };
    return table;
  }
};

}  // namespace rspell
