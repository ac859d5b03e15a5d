// rspell: build lexicon indices, retrieve domain terms, correct and score
// Chinese spelling.
//
// Exit codes: 0 success, 2 usage or configuration error, 1 runtime failure.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rspell/rspell.hpp"

namespace fs = std::filesystem;
using namespace rspell;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

// Flags that overlay the config file.
struct Overrides {
  std::optional<std::string> readings, lexicon, index, lm, confusion, words;
  std::optional<double> theta;
  std::optional<std::size_t> ngram_max, top_k;
  std::optional<std::string> fuzzy_initials, fuzzy_finals;
  std::optional<double> w_lm, w_channel, w_retrieval;
  std::optional<std::string> separator;
  bool no_retrieval = false;
  bool secondary_search = false;
  bool no_secondary_search = false;

  void apply(ToolConfig& c) const {
    const auto put = [](auto& dst, const auto& src) {
      if (src) dst = *src;
    };
    put(c.readings, readings);
    put(c.lexicon, lexicon);
    put(c.index, index);
    put(c.lm, lm);
    put(c.confusion, confusion);
    put(c.words, words);
    put(c.theta, theta);
    put(c.ngram_max, ngram_max);
    put(c.top_k, top_k);
    put(c.fuzzy_initials, fuzzy_initials);
    put(c.fuzzy_finals, fuzzy_finals);
    put(c.weights.lm, w_lm);
    put(c.weights.channel, w_channel);
    put(c.weights.retrieval, w_retrieval);
    put(c.separator, separator);
    if (no_retrieval) {
      c.use_retrieval = false;
      if (!secondary_search) c.use_secondary_search = false;
    }
    if (secondary_search) c.use_secondary_search = true;
    if (no_secondary_search) c.use_secondary_search = false;
  }
};

std::string default_readings() {
#ifdef RSPELL_DEFAULT_READINGS
  return RSPELL_DEFAULT_READINGS;
#else
  return {};
#endif
}

std::string default_words() {
#ifdef RSPELL_DEFAULT_WORDS
  return RSPELL_DEFAULT_WORDS;
#else
  return {};
#endif
}

void require_file(const std::string& path, const std::string& what) {
  if (path.empty()) throw ConfigError(what + " path is required");
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) throw ConfigError(what + " not found: " + path);
}

void require_out_dir(const std::string& path) {
  const fs::path dir = fs::path(path).parent_path();
  std::error_code ec;
  if (!dir.empty() && !fs::is_directory(dir, ec)) throw ConfigError("output directory does not exist: " + dir.string());
}

std::string readings_path(const ToolConfig& c) { return c.readings.empty() ? default_readings() : c.readings; }
std::string words_path(const ToolConfig& c) { return c.words.empty() ? default_words() : c.words; }

// Writes through a sibling temp file so a failed run leaves no partial
// artifact behind.
void write_atomically(const std::string& path, const std::function<void(std::ostream&)>& body) {
  const std::string tmp = path + ".tmp";
  try {
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw IoError("cannot write " + tmp);
      body(out);
      out.flush();
      if (!out) throw IoError("failed writing " + tmp);
    }
    fs::rename(tmp, path);
  } catch (...) {
    std::error_code ec;
    fs::remove(tmp, ec);
    throw;
  }
}

std::vector<std::string> read_nonempty_lines(std::istream& in) {
  std::vector<std::string> out;
  std::string raw;
  while (std::getline(in, raw)) {
    const auto line = detail::chomp(raw);
    if (!detail::trim(line).empty()) out.emplace_back(line);
  }
  return out;
}

void add_retriever_options(CLI::App* sub, Overrides& o) {
  sub->add_option("--theta", o.theta, "Similarity threshold in [0, 1]");
  sub->add_option("--top-k", o.top_k, "Matches kept per query");
  sub->add_option("--ngram-max", o.ngram_max, "Longest syllable n-gram feature");
  sub->add_option("--fuzzy-initials", o.fuzzy_initials, "Initial classes, e.g. \"zh z, ch c\"");
  sub->add_option("--fuzzy-finals", o.fuzzy_finals, "Final classes, e.g. \"in ing, en eng\"");
}

// Everything a correction or retrieval run reads, loaded once.
struct Artifacts {
  explicit Artifacts(ToolConfig c) : config(std::move(c)) {}

  ToolConfig config;
  CharReadingTable table;
  std::optional<LoadedIndex> index;
  SegmentDict dict;
  std::optional<NGramModel> lm;
  ConfusionSet cs;
  RetrieverConfig retriever;
  std::unique_ptr<RetrievalContext> ctx;
  std::unique_ptr<BaselineSpeller> speller;

  void check_paths(bool need_index, bool need_lm) const {
    require_file(readings_path(config), "reading table");
    if (need_index) require_file(config.index, "index");
    if (need_lm) require_file(config.lm, "language model");
    if (!config.confusion.empty()) require_file(config.confusion, "confusion set");
    if (!words_path(config).empty()) require_file(words_path(config), "word list");
  }

  void load(bool need_index, bool need_lm) {
    retriever = config.retriever_config();
    table = load_reading_table(readings_path(config));
    std::vector<std::string> words;
    if (!words_path(config).empty()) words = load_word_list(words_path(config));
    if (need_index) {
      index = load_index(config.index);
      if (index->index.fingerprint() != retriever.fingerprint()) {
        throw ConfigError("index was built with ngram_max/fuzzy settings that differ from the configuration");
      }
      for (const auto& e : index->index.entries()) words.push_back(e.word);
    }
    dict = build_segment_dict(words);
    if (index) ctx = std::make_unique<RetrievalContext>(RetrievalContext{dict, table, index->index, retriever});
    if (need_lm) {
      lm = NGramModel::load(config.lm);
      cs = config.confusion.empty()
               ? ConfusionSet::from_homophones(table, retriever.fuzzy, [this](char32_t c) { return lm->in_vocab(c); })
               : ConfusionSet::load(config.confusion);
      speller = std::make_unique<BaselineSpeller>(table, retriever.fuzzy, cs, *lm, config.weights);
    }
  }
};

int cmd_build_index(const ToolConfig& c, const std::string& out_path) {
  require_file(readings_path(c), "reading table");
  require_file(c.lexicon, "lexicon");
  require_out_dir(out_path);
  const RetrieverConfig rc = c.retriever_config();
  const auto table = load_reading_table(readings_path(c));
  const auto load = ingest_lexicon(c.lexicon, table, rc.fuzzy);
  for (const auto& r : load.rejected) {
    std::cerr << c.lexicon << ":" << r.line << ": rejected: " << r.reason << "\n";
  }
  if (load.entries.empty()) throw ConfigError("lexicon has no usable entries: " + c.lexicon);
  const auto index = build_index(load.entries, rc);
  write_atomically(out_path, [&](std::ostream& out) { save_index(out, index, rc); });
  std::cout << "entries " << index.size() << "\n";
  if (load.duplicates) std::cerr << "duplicates skipped: " << load.duplicates << "\n";
  return kExitOk;
}

int cmd_retrieve(const ToolConfig& c, const std::vector<std::string>& sentences, bool augmented) {
  Artifacts a(c);
  a.check_paths(true, false);
  a.load(true, false);
  std::vector<std::string> inputs = sentences;
  if (inputs.empty()) inputs = read_nonempty_lines(std::cin);
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const SourceSentence x(inputs[i]);
    const auto r = retrieve(x, *a.ctx);
    if (augmented) {
      std::cout << build_augmented(x, r, c.separator).rendered << "\n";
      continue;
    }
    if (i) std::cout << "\n";
    for (std::size_t t = 0; t < r.size(); ++t) {
      char score[32];
      std::snprintf(score, sizeof score, "%.6f", r.per_term_score[t]);
      std::cout << r.terms[t] << "\t" << score << "\n";
    }
  }
  return kExitOk;
}

int cmd_correct(const ToolConfig& c, const std::string& input, const std::string& output, unsigned jobs) {
  const PipelineConfig pc = c.pipeline_config();
  if (!input.empty()) require_file(input, "dataset");
  if (!output.empty()) require_out_dir(output);
  Artifacts a(c);
  a.check_paths(pc.use_retrieval, true);
  a.load(pc.use_retrieval, true);
  const PipelineDeps deps{*a.speller, a.ctx.get()};

  std::ifstream file_in;
  if (!input.empty()) file_in.open(input);
  std::istream& in = input.empty() ? std::cin : file_in;
  RunSummary s;
  if (output.empty()) {
    s = run_stream(in, std::cout, pc, deps, jobs);
  } else {
    write_atomically(output, [&](std::ostream& out) { s = run_stream(in, out, pc, deps, jobs); });
  }
  for (const auto& d : s.diagnostics) std::cerr << (input.empty() ? "<stdin>" : input) << ": " << d << "\n";
  std::cerr << "sentences " << s.sentences << " changed " << s.changed << " skipped " << s.errors << "\n";
  return kExitOk;
}

int cmd_eval(const std::string& triples, const std::string& pred, const std::string& gold, bool table) {
  std::vector<EvalPair> pairs;
  if (!triples.empty()) {
    if (!pred.empty() || !gold.empty()) throw ConfigError("use either --input or --pred/--gold");
    require_file(triples, "triples file");
    std::ifstream in(triples);
    pairs = parse_eval_triples(in);
  } else {
    require_file(pred, "prediction file");
    require_file(gold, "gold file");
    std::ifstream p(pred), g(gold);
    pairs = join_predictions(p, g);
  }
  const auto report = evaluate(pairs);
  std::cout << (table ? format_report_table(report) : format_report_kv(report));
  return kExitOk;
}

int cmd_expand(const ToolConfig& c, const std::string& corpus, const std::string& out_path, std::size_t min_freq,
               std::size_t min_len) {
  require_file(readings_path(c), "reading table");
  require_file(c.lexicon, "base lexicon");
  require_file(corpus, "corpus");
  if (!words_path(c).empty()) require_file(words_path(c), "word list");
  require_out_dir(out_path);
  const RetrieverConfig rc = c.retriever_config();
  const auto table = load_reading_table(readings_path(c));
  const auto base = ingest_lexicon(c.lexicon, table, rc.fuzzy);
  std::vector<std::string> words;
  if (!words_path(c).empty()) words = load_word_list(words_path(c));
  for (const auto& e : base.entries) words.push_back(e.word);
  const auto dict = build_segment_dict(words);
  const auto expanded = expand_lexicon(corpus, base.entries, dict, min_freq, min_len, table, rc.fuzzy);
  write_atomically(out_path, [&](std::ostream& out) { write_lexicon(out, expanded); });
  std::cout << "base " << base.entries.size() << " added " << expanded.size() - base.entries.size() << " total "
            << expanded.size() << "\n";
  return kExitOk;
}

int cmd_train_lm(const std::string& corpus, const std::string& out_path, int order, double k) {
  require_file(corpus, "corpus");
  require_out_dir(out_path);
  NGramParams params = NGramParams::for_order(order);
  params.k = k;
  params.validate();
  std::ifstream in(corpus);
  const NGramModel lm = NGramModel::train(in, params);
  if (lm.tokens() == 0) throw ConfigError("corpus is empty: " + corpus);
  write_atomically(out_path, [&](std::ostream& out) { lm.save(out); });
  std::cout << "order " << lm.order() << " vocab " << lm.vocab_size() << " tokens " << lm.tokens() << "\n";
  return kExitOk;
}

// Train-time loss diagnostics over "<source>\t<target>" lines: the plain
// branch sees the bare sentence, the augmented branch sees the retrieved
// terms; the gate decides whether the latter is charged.
int cmd_diagnose_loss(const ToolConfig& c, const std::string& input, bool no_gate) {
  require_file(input, "dataset");
  Artifacts a(c);
  a.check_paths(true, true);
  a.load(true, true);
  std::ifstream in(input);
  std::string raw;
  std::size_t line_no = 0, n = 0, open = 0;
  double sum_c = 0, sum_r = 0;
  std::cout << "line\tloss_c\tloss_r\ttotal\tgate\n";
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = detail::chomp(raw);
    if (line.empty()) continue;
    const auto f = detail::split_tabs(line);
    if (f.size() != 2 || utf8::length(f[0]) != utf8::length(f[1])) {
      throw ParseError("expected <source>\\t<target> of equal length", line_no);
    }
    const SourceSentence x(f[0]);
    const TargetSentence y(f[1]);
    const auto r = retrieve(x, *a.ctx);
    const auto m_c = a.speller->predict(x, {});
    const auto m_r = a.speller->predict(x, r);
    const auto l = combined_loss(m_c, &m_r, r, y, !no_gate);
    char buf[160];
    std::snprintf(buf, sizeof buf, "%zu\t%.6f\t%.6f\t%.6f\t%s\n", line_no, l.loss_c, l.loss_r, l.total,
                  l.gate_open ? "open" : "closed");
    std::cout << buf;
    ++n;
    open += l.gate_open;
    sum_c += l.loss_c;
    sum_r += l.loss_r;
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "# sentences=%zu gate_open=%zu mean_loss_c=%.6f mean_loss_r=%.6f\n", n, open,
                n ? sum_c / n : 0.0, n ? sum_r / n : 0.0);
  std::cout << buf;
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Retrieval-augmented Chinese spelling check"};
  app.require_subcommand(0, 1);
  app.set_version_flag("--version", std::string("rspell ") + kVersion + "\nindex format " +
                                        std::to_string(kIndexFormatVersion) + "\nlm format " +
                                        std::to_string(NGramModel::kFormatVersion));

  std::string config_path;
  bool print_config = false;
  Overrides o;
  app.add_option("--config", config_path, std::string("Config file (default: $") + kConfigEnvVar + ")");
  app.add_flag("--print-config", print_config, "Print the effective configuration and exit");

  auto* build = app.add_subcommand("build-index", "Index a domain lexicon");
  std::string out_path;
  build->add_option("--lexicon", o.lexicon, "Lexicon file: <word>[\\t<pinyin>] per line");
  build->add_option("--readings", o.readings, "Reading table");
  build->add_option("--out", out_path, "Index artifact to write")->required();
  add_retriever_options(build, o);

  auto* retr = app.add_subcommand("retrieve", "Print the domain terms retrieved for sentences");
  std::vector<std::string> sentences;
  bool augmented = false;
  retr->add_option("sentences", sentences, "Sentences (default: one per stdin line)");
  retr->add_option("--index", o.index, "Index artifact");
  retr->add_option("--readings", o.readings, "Reading table");
  retr->add_option("--words", o.words, "General word list for segmentation");
  retr->add_option("--separator", o.separator, "Separator before the prompt");
  retr->add_flag("--augmented", augmented, "Print the augmented input instead of scores");
  add_retriever_options(retr, o);

  auto* corr = app.add_subcommand("correct", "Correct a dataset");
  std::string input, output;
  unsigned jobs = 1;
  corr->add_option("--input", input, "Dataset: <source>[\\t<target>] per line (default: stdin)");
  corr->add_option("--output", output, "Predictions file (default: stdout)");
  corr->add_option("--index", o.index, "Index artifact");
  corr->add_option("--lm", o.lm, "Language model artifact");
  corr->add_option("--confusion", o.confusion, "Confusion set (default: homophones from the reading table)");
  corr->add_option("--readings", o.readings, "Reading table");
  corr->add_option("--words", o.words, "General word list for segmentation");
  corr->add_flag("--no-retrieval", o.no_retrieval, "Bare speller, no retrieval (implies a single pass)");
  auto* sss_on = corr->add_flag("--secondary-search", o.secondary_search, "Re-retrieve and correct a second time");
  corr->add_flag("--no-secondary-search", o.no_secondary_search, "Single pass")->excludes(sss_on);
  corr->add_option("--jobs", jobs, "Worker threads")->check(CLI::Range(1u, 256u));
  corr->add_option("--w-lm", o.w_lm, "LM weight");
  corr->add_option("--w-channel", o.w_channel, "Penalty per changed character");
  corr->add_option("--w-retrieval", o.w_retrieval, "Bonus for retrieval-backed candidates");
  add_retriever_options(corr, o);

  auto* ev = app.add_subcommand("eval", "Sentence-level detection/correction scores");
  std::string triples, pred, gold;
  bool table = false;
  ev->add_option("--input", triples, "Triples: <source>\\t<gold>\\t<prediction> per line");
  ev->add_option("--pred", pred, "Predictions written by correct");
  ev->add_option("--gold", gold, "Dataset with gold targets");
  ev->add_flag("--table", table, "Human-readable table instead of key=value lines");

  auto* exp = app.add_subcommand("expand-lexicon", "Add frequent corpus words to a lexicon");
  std::string corpus;
  std::size_t min_freq = 2, min_len = 2;
  exp->add_option("--corpus", corpus, "Corpus, one sentence per line")->required();
  exp->add_option("--lexicon", o.lexicon, "Base lexicon");
  exp->add_option("--readings", o.readings, "Reading table");
  exp->add_option("--words", o.words, "General word list for segmentation");
  exp->add_option("--min-freq", min_freq, "Minimum frequency")->check(CLI::PositiveNumber);
  exp->add_option("--min-len", min_len, "Minimum word length in characters")->check(CLI::PositiveNumber);
  exp->add_option("--out", out_path, "Expanded lexicon to write")->required();
  exp->add_option("--fuzzy-initials", o.fuzzy_initials, "Initial classes");
  exp->add_option("--fuzzy-finals", o.fuzzy_finals, "Final classes");

  auto* tlm = app.add_subcommand("train-lm", "Train the character n-gram model");
  int order = 3;
  double k = 0.01;
  tlm->add_option("--corpus", corpus, "Corpus, one sentence per line")->required();
  tlm->add_option("--out", out_path, "Model artifact to write")->required();
  tlm->add_option("--order", order, "N-gram order (1-3)")->check(CLI::Range(1, 3));
  tlm->add_option("--k", k, "Add-k constant")->check(CLI::PositiveNumber);

  auto* diag = app.add_subcommand("diagnose-loss", "Per-sentence training losses of the baseline speller");
  bool no_gate = false;
  diag->add_option("--input", input, "Dataset: <source>\\t<target> per line")->required();
  diag->add_option("--index", o.index, "Index artifact");
  diag->add_option("--lm", o.lm, "Language model artifact");
  diag->add_option("--confusion", o.confusion, "Confusion set");
  diag->add_option("--readings", o.readings, "Reading table");
  diag->add_option("--words", o.words, "General word list for segmentation");
  diag->add_flag("--no-gate", no_gate, "Always charge the retrieval branch");
  add_retriever_options(diag, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    ToolConfig config;
    if (config_path.empty()) {
      if (const char* env = std::getenv(kConfigEnvVar); env && *env) config_path = env;
    }
    if (!config_path.empty()) config.merge_file(config_path);
    o.apply(config);
    config.retriever_config();  // validates
    if (print_config) {
      std::cout << config.print();
      return kExitOk;
    }
    if (*build) return cmd_build_index(config, out_path);
    if (*retr) return cmd_retrieve(config, sentences, augmented);
    if (*corr) return cmd_correct(config, input, output, jobs);
    if (*ev) return cmd_eval(triples, pred, gold, table);
    if (*exp) return cmd_expand(config, corpus, out_path, min_freq, min_len);
    if (*tlm) return cmd_train_lm(corpus, out_path, order, k);
    if (*diag) return cmd_diagnose_loss(config, input, no_gate);
    std::cerr << app.help();
    return kExitUsage;
  } catch (const ConfigError& e) {
    std::cerr << "rspell: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParseError& e) {
    std::cerr << "rspell: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "rspell: " << e.what() << "\n";
    return kExitRuntime;
  }
}
