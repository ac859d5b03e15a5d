// End-to-end runs of the rspell binary.

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "med_fixture.hpp"

namespace fs = std::filesystem;
using rspell::testkit::fixture_path;
using rspell::testkit::kTable1Source;
using rspell::testkit::kTable1Target;

namespace {

struct Result {
  int code = -1;
  std::string out;
};

std::string quote(const std::string& s) {
  std::string q = "'";
  for (char c : s) q += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return q + "'";
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    std::random_device rd;
    dir_ = fs::temp_directory_path() / ("rspell_cli_" + std::to_string(rd()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  void write(const std::string& name, const std::string& text) const { std::ofstream(path(name)) << text; }

  static std::string slurp(const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  }

  // stdout only; stderr is dropped.
  Result run(const std::string& args) const {
    const std::string cmd = "env -u RSPELL_CONFIG " + quote(RSPELL_CLI_PATH) + " " + args + " 2>/dev/null";
    Result r;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return r;
    std::array<char, 4096> buf{};
    for (std::size_t n; (n = std::fread(buf.data(), 1, buf.size(), p)) > 0;) r.out.append(buf.data(), n);
    const int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
  }

  std::string words() const { return " --words " + quote(fixture_path("words.txt")); }

  void build_index() const {
    ASSERT_EQ(run("build-index --lexicon " + quote(fixture_path("lexicon.txt")) + " --out " + path("idx")).code, 0);
  }
  void train_lm() const {
    ASSERT_EQ(run("train-lm --corpus " + quote(fixture_path("lm_corpus.txt")) + " --out " + path("lm")).code, 0);
  }

  fs::path dir_;
};

TEST_F(Cli, VersionAndUsageErrors) {
  const Result v = run("--version");
  EXPECT_EQ(v.code, 0);
  EXPECT_NE(v.out.find("rspell "), std::string::npos);
  EXPECT_NE(v.out.find("index format 1"), std::string::npos);
  EXPECT_EQ(run("--bogus").code, 2);
  EXPECT_EQ(run("correct --secondary-search --no-secondary-search").code, 2);
  EXPECT_EQ(run("train-lm --corpus x --out y --order 4").code, 2);
}

TEST_F(Cli, BuildIndexIsReproducibleAndFailsCleanly) {
  build_index();
  const Result again = run("build-index --lexicon " + quote(fixture_path("lexicon.txt")) + " --out " + path("idx2"));
  EXPECT_EQ(again.code, 0);
  EXPECT_EQ(again.out.rfind("entries ", 0), 0u);
  EXPECT_EQ(slurp(path("idx")), slurp(path("idx2")));

  EXPECT_EQ(run("build-index --lexicon " + path("missing.txt") + " --out " + path("none")).code, 2);
  EXPECT_FALSE(fs::exists(path("none")));
  EXPECT_EQ(run("build-index --lexicon " + quote(fixture_path("lexicon.txt")) + " --out " + path("no/dir/idx")).code, 2);
}

TEST_F(Cli, RetrieveTable1) {
  build_index();
  const Result r = run("retrieve --index " + path("idx") + words() + " " + quote(kTable1Source));
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "弱视\t1.000000\n医学验光\t1.000000\n配镜\t1.000000\n矫正\t1.000000\n");

  const Result aug = run("retrieve --augmented --index " + path("idx") + words() + " " + quote(kTable1Source));
  EXPECT_EQ(aug.out, std::string(rspell::testkit::kTable1Augmented) + "\n");

  const Result none = run("retrieve --index " + path("idx") + " " + quote("今天天气很好。"));
  EXPECT_EQ(none.code, 0);
  EXPECT_EQ(none.out, "");
  EXPECT_EQ(run("retrieve --index " + path("absent") + " x").code, 2);
}

TEST_F(Cli, RetrieveRejectsIndexBuiltWithOtherSettings) {
  ASSERT_EQ(run("build-index --ngram-max 1 --lexicon " + quote(fixture_path("lexicon.txt")) + " --out " + path("idx"))
                .code,
            0);
  EXPECT_EQ(run("retrieve --index " + path("idx") + " " + quote(kTable1Source)).code, 2);
}

TEST_F(Cli, CorrectWithAndWithoutRetrieval) {
  build_index();
  train_lm();
  write("ds", std::string(kTable1Source) + "\t" + kTable1Target + "\n");
  const std::string common = " --input " + path("ds") + " --index " + path("idx") + " --lm " + path("lm") + words();
  const Result with = run("correct" + common);
  ASSERT_EQ(with.code, 0);
  EXPECT_EQ(with.out, std::string(kTable1Source) + "\t" + kTable1Target + "\n");
  const Result without = run("correct --no-retrieval" + common);
  ASSERT_EQ(without.code, 0);
  EXPECT_EQ(without.out, std::string(kTable1Source) + "\t" + kTable1Source + "\n");

  EXPECT_EQ(run("correct --jobs 1 --output " + path("p1") + common).code, 0);
  EXPECT_EQ(run("correct --jobs 4 --output " + path("p4") + common).code, 0);
  EXPECT_EQ(slurp(path("p1")), slurp(path("p4")));

  const Result ev = run("eval --pred " + path("p1") + " --gold " + path("ds"));
  EXPECT_EQ(ev.code, 0);
  EXPECT_NE(ev.out.find("correction.f1=1.000000"), std::string::npos);
  EXPECT_EQ(run("correct --input " + path("ds") + " --lm " + path("lm")).code, 2);  // no index
}

TEST_F(Cli, Eval) {
  write("t", "进行校正\t进行矫正\t进行矫正\n治疗若视\t治疗弱视\t冶疗若视\n配镜验光\t配镜验光\t配镜验光\n");
  const Result r = run("eval --input " + path("t"));
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("detection.f1=0.500000"), std::string::npos);
  EXPECT_NE(r.out.find("correction.f1=0.500000"), std::string::npos);
  EXPECT_EQ(run("eval --table --input " + path("t")).code, 0);

  write("pred", "进行校正\t进行矫正\n");
  write("gold", "进行校正\t进行矫正\n配镜验光\t配镜验光\n");
  EXPECT_EQ(run("eval --pred " + path("pred") + " --gold " + path("gold")).code, 2);
  write("bad", "进行校正\t进行矫正\n");
  EXPECT_EQ(run("eval --input " + path("bad")).code, 2);
}

TEST_F(Cli, ExpandLexicon) {
  write("base", "医学验光\n");
  const std::string base = " --lexicon " + path("base") + words();
  const Result r = run("expand-lexicon --corpus " + quote(fixture_path("clean.txt")) + base + " --out " + path("x"));
  ASSERT_EQ(r.code, 0);
  // scripts/expand_oracle.py clean.txt <base> words.txt finds the same 73.
  EXPECT_EQ(r.out, "base 1 added 73 total 74\n");
  const auto lines = rspell::testkit::read_lines(path("x"));
  ASSERT_EQ(lines.size(), 74u);
  EXPECT_EQ(lines[6].substr(0, lines[6].find('\t')), "血压");
  EXPECT_EQ(lines.back().substr(0, lines.back().find('\t')), "用药");
  EXPECT_EQ(lines[0].substr(0, lines[0].find('\t')), "医学验光");

  write("empty", "");
  EXPECT_EQ(run("expand-lexicon --corpus " + path("empty") + base + " --out " + path("e")).out, "base 1 added 0 total 1\n");
  EXPECT_EQ(run("expand-lexicon --min-freq 100000 --corpus " + quote(fixture_path("clean.txt")) + base + " --out " +
                path("h"))
                .out,
            "base 1 added 0 total 1\n");
  EXPECT_EQ(slurp(path("e")), slurp(path("h")));
}

TEST_F(Cli, TrainLm) {
  train_lm();
  ASSERT_EQ(run("train-lm --corpus " + quote(fixture_path("lm_corpus.txt")) + " --out " + path("lm2")).code, 0);
  EXPECT_EQ(slurp(path("lm")), slurp(path("lm2")));
  std::istringstream head(slurp(path("lm")));
  std::string line;
  std::getline(head, line);
  EXPECT_EQ(line, "rspell-lm 1");
  std::getline(head, line);
  EXPECT_EQ(line, "order 3");
  write("empty", "");
  EXPECT_EQ(run("train-lm --corpus " + path("empty") + " --out " + path("lm3")).code, 2);
  EXPECT_FALSE(fs::exists(path("lm3")));
}

TEST_F(Cli, PrintConfigAppliesFileThenFlags) {
  write("rspell.conf", "# desk\nretriever.theta = 0.4\nretriever.top_k = 7\npaths.index = art/idx\n");
  const Result r = run("--config " + path("rspell.conf") + " --print-config");
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("retriever.theta = 0.4\n"), std::string::npos);
  EXPECT_NE(r.out.find("retriever.top_k = 7\n"), std::string::npos);
  EXPECT_NE(r.out.find("paths.index = " + path("art/idx") + "\n"), std::string::npos);
  EXPECT_EQ(run("--config " + path("absent.conf") + " --print-config").code, 2);
  write("bad.conf", "retriever.nope = 1\n");
  EXPECT_EQ(run("--config " + path("bad.conf") + " --print-config").code, 2);
}

TEST_F(Cli, DiagnoseLoss) {
  build_index();
  train_lm();
  write("ds", std::string(kTable1Source) + "\t" + kTable1Target + "\n进行检查。\t进行检查。\n");
  const std::string common = " --input " + path("ds") + " --index " + path("idx") + " --lm " + path("lm") + words();
  const Result gated = run("diagnose-loss" + common);
  ASSERT_EQ(gated.code, 0);
  EXPECT_EQ(gated.out.rfind("line\tloss_c\tloss_r\ttotal\tgate\n", 0), 0u);
  EXPECT_NE(gated.out.find("gate_open=1 "), std::string::npos);
  const Result always = run("diagnose-loss --no-gate" + common);
  ASSERT_EQ(always.code, 0);
  EXPECT_NE(always.out.find("gate_open=2 "), std::string::npos);
}

}  // namespace
