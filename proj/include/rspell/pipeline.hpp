#pragma once

#include <algorithm>
#include <exception>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "rspell/error.hpp"
#include "rspell/retriever.hpp"
#include "rspell/speller.hpp"

namespace rspell {

struct PipelineConfig {
  bool use_retrieval = true;         // off = bare speller
  bool use_secondary_search = true;  // off = single pass
  RetrieverConfig retriever;
  SpellerWeights weights;

  void validate() const {
    if (use_secondary_search && !use_retrieval) {
      throw ConfigError("secondary search requires retrieval");
    }
    retriever.validate();
  }
};

// Shared, read-only artifacts. retrieval may be null only when retrieval is
// disabled.
struct PipelineDeps {
  const Speller& speller;
  const RetrievalContext* retrieval = nullptr;
};

namespace detail {

inline std::vector<std::size_t> changed_positions(const std::u32string& a, const std::u32string& b) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
    if (a[i] != b[i]) out.push_back(i);
  }
  return out;
}

inline RetrievalResult retrieve_if_enabled(const SourceSentence& x, const PipelineConfig& config,
                                           const PipelineDeps& deps) {
  if (!config.use_retrieval) return {};
  if (!deps.retrieval) throw ConfigError("retrieval is enabled but no index is loaded");
  return retrieve(x, *deps.retrieval);
}

}  // namespace detail

inline CorrectionResult correct_once(const SourceSentence& x, const PipelineConfig& config, const PipelineDeps& deps) {
  CorrectionResult result;
  result.source = x;
  RetrievalResult r = detail::retrieve_if_enabled(x, config, deps);
  result.output = decode(deps.speller.predict(x, r));
  result.changed_positions = detail::changed_positions(x.chars, utf8::decode(result.output));
  result.per_pass_terms.push_back(std::move(r));
  return result;
}

// Correct, retrieve again on the corrected text, correct that text once
// more. Never more than two passes.
inline CorrectionResult correct_secondary(const SourceSentence& x, const PipelineConfig& config,
                                          const PipelineDeps& deps) {
  if (!config.use_secondary_search) throw ConfigError("secondary search is disabled");
  CorrectionResult first = correct_once(x, config, deps);
  const SourceSentence corrected(first.output);
  RetrievalResult r2 = detail::retrieve_if_enabled(corrected, config, deps);
  CorrectionResult result;
  result.source = x;
  result.output = decode(deps.speller.predict(corrected, r2));
  result.changed_positions = detail::changed_positions(x.chars, utf8::decode(result.output));
  result.per_pass_terms = std::move(first.per_pass_terms);
  result.per_pass_terms.push_back(std::move(r2));
  return result;
}

inline CorrectionResult correct(const SourceSentence& x, const PipelineConfig& config, const PipelineDeps& deps) {
  return config.use_secondary_search ? correct_secondary(x, config, deps) : correct_once(x, config, deps);
}

struct RunSummary {
  std::size_t sentences = 0;
  std::size_t changed = 0;
  std::size_t errors = 0;
  std::vector<std::string> diagnostics;  // one per skipped line
};

// Dataset lines are "<source>" or "<source>\t<target>"; predictions are
// written as "<source>\t<prediction>" in input order. Malformed lines are
// reported and skipped. jobs > 1 corrects sentences on worker threads.
inline RunSummary run_stream(std::istream& in, std::ostream& out, const PipelineConfig& config,
                             const PipelineDeps& deps, unsigned jobs = 1) {
  config.validate();
  RunSummary summary;
  std::vector<SourceSentence> inputs;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = detail::chomp(raw);
    if (line.empty()) continue;
    const auto fields = detail::split_tabs(line);
    std::string problem;
    if (fields.size() > 2) {
      problem = "expected <source>[\\t<target>]";
    } else if (fields[0].empty()) {
      problem = "empty source";
    } else if (fields.size() == 2 && !fields[1].empty() && utf8::length(fields[1]) != utf8::length(fields[0])) {
      problem = "source and target differ in length";
    }
    if (!problem.empty()) {
      ++summary.errors;
      summary.diagnostics.push_back("line " + std::to_string(line_no) + ": " + problem);
      continue;
    }
    inputs.emplace_back(fields[0]);
  }

  std::vector<std::string> outputs(inputs.size());
  const auto work = [&](std::size_t begin, std::size_t stride) {
    for (std::size_t i = begin; i < inputs.size(); i += stride) outputs[i] = correct(inputs[i], config, deps).output;
  };
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(inputs.size(), 1))));
  if (jobs == 1) {
    work(0, 1);
  } else {
    std::vector<std::exception_ptr> failures(jobs);
    {
      std::vector<std::jthread> workers;
      for (unsigned t = 0; t < jobs; ++t) {
        workers.emplace_back([&, t] {
          try {
            work(t, jobs);
          } catch (...) {
            failures[t] = std::current_exception();
          }
        });
      }
    }
    for (const auto& f : failures) {
      if (f) std::rethrow_exception(f);
    }
  }

  for (std::size_t i = 0; i < inputs.size(); ++i) {
    out << inputs[i].text << '\t' << outputs[i] << '\n';
    ++summary.sentences;
    if (outputs[i] != inputs[i].text) ++summary.changed;
  }
  return summary;
}

inline RunSummary run_file(const std::string& dataset_path, const std::string& out_path, const PipelineConfig& config,
                           const PipelineDeps& deps, unsigned jobs = 1) {
  std::ifstream in(dataset_path);
  if (!in) throw IoError("cannot open dataset: " + dataset_path);
  std::ofstream out(out_path);
  if (!out) throw IoError("cannot write predictions: " + out_path);
  RunSummary summary = run_stream(in, out, config, deps, jobs);
  if (!out.flush()) throw IoError("failed writing predictions: " + out_path);
  return summary;
}

}  // namespace rspell
