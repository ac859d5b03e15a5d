#include <gtest/gtest.h>

#include <random>

#include "med_fixture.hpp"

using namespace rspell;
using rspell::testkit::med_fixture;

namespace {

std::vector<std::string> words_of(const PinyinQuerySet& s) {
  std::vector<std::string> out;
  for (const auto& q : s.queries) out.push_back(q.word);
  return out;
}

}  // namespace

TEST(MakeQueries, DropsPunctuation) {
  const auto& fx = med_fixture();
  const auto q = make_queries(SourceSentence("治疗弱视。"), fx.dict, fx.table, fx.config.fuzzy);
  EXPECT_EQ(words_of(q), (std::vector<std::string>{"治疗", "弱视"}));
  EXPECT_EQ(q.queries[1].py.text(), "ruo si");
  EXPECT_TRUE(make_queries(SourceSentence(""), fx.dict, fx.table, fx.config.fuzzy).queries.empty());
  EXPECT_TRUE(make_queries(SourceSentence("CT，MRI。"), fx.dict, fx.table, fx.config.fuzzy).queries.empty());
}

TEST(MakeQueries, Table1HasJiaoZhengQuery) {
  const auto& fx = med_fixture();
  const auto q = make_queries(SourceSentence(testkit::kTable1Source), fx.dict, fx.table, fx.config.fuzzy);
  const auto jz = normalize(*PinyinString::parse("jiao zheng"), fx.config.fuzzy);
  const auto it = std::find_if(q.queries.begin(), q.queries.end(), [&](const PinyinQuery& x) { return x.word == "校正"; });
  ASSERT_NE(it, q.queries.end());
  EXPECT_EQ(it->py, jz);
}

TEST(Retrieve, Table1Terms) {
  const auto& fx = med_fixture();
  const auto r = retrieve(SourceSentence(testkit::kTable1Source), *fx.ctx);
  EXPECT_EQ(r.terms, (std::vector<std::string>{"弱视", "医学验光", "配镜", "矫正"}));
  ASSERT_EQ(r.per_term_score.size(), r.terms.size());
  for (double s : r.per_term_score) EXPECT_EQ(s, 1.0);
}

TEST(Retrieve, NoMatchGivesEmptyResult) {
  const auto& fx = med_fixture();
  EXPECT_TRUE(retrieve(SourceSentence("今天天气很好。"), *fx.ctx).empty());
  EXPECT_TRUE(retrieve(SourceSentence(""), *fx.ctx).empty());
}

TEST(Retrieve, DuplicateHitsKeepMaxScore) {
  // 矫正 is found exactly through 校正 and partially through 矫形 (jiao xing).
  const auto& t = testkit::bundled_table();
  RetrieverConfig cfg;
  cfg.theta = 0.3;
  std::vector<LexiconEntry> lex = {{"矫正", to_pinyin("矫正", t)}, {"阑尾炎", to_pinyin("阑尾炎", t)}};
  const auto index = build_index(lex, cfg);
  const auto dict = build_segment_dict({"矫形", "校正", "矫正", "阑尾炎"});
  const RetrievalContext ctx{dict, t, index, cfg};
  const SourceSentence x("矫形和校正");
  const auto partial = index.query(normalize(to_pinyin("矫形", t), cfg.fuzzy), cfg);
  ASSERT_EQ(partial.size(), 1u);
  ASSERT_LT(partial[0].score, 1.0);
  const auto r = retrieve(x, ctx);
  ASSERT_EQ(r.terms, std::vector<std::string>{"矫正"});
  EXPECT_EQ(r.per_term_score[0], 1.0);
}

TEST(Retrieve, OrderedByFirstQueryThenScore) {
  const auto& fx = med_fixture();
  const auto r = retrieve(SourceSentence("配镜前先治疗弱视。"), *fx.ctx);
  ASSERT_GE(r.terms.size(), 2u);
  EXPECT_EQ(r.terms[0], "配镜");
  EXPECT_EQ(r.terms[1], "弱视");
}

TEST(Retrieve, PropertiesOnRandomSentences) {
  const auto& fx = med_fixture();
  std::set<std::string> words;
  for (const auto& e : fx.index.entries()) words.insert(e.word);
  const auto lines = testkit::read_lines(testkit::fixture_path("clean.txt"));
  for (const auto& line : lines) {
    const SourceSentence x(line);
    const auto r = retrieve(x, *fx.ctx);
    EXPECT_EQ(retrieve(x, *fx.ctx).terms, r.terms);
    std::set<std::string> seen(r.terms.begin(), r.terms.end());
    EXPECT_EQ(seen.size(), r.terms.size());
    for (const auto& term : r.terms) EXPECT_TRUE(words.count(term)) << term;
    // a lexicon word written correctly and segmented as a unit is retrieved
    for (const auto& tok : segment(std::u32string_view(x.chars), fx.dict).words) {
      if (words.count(tok.text)) {
        EXPECT_TRUE(seen.count(tok.text)) << line << " / " << tok.text;
      }
    }
  }
}

TEST(BuildAugmented, Table1String) {
  const auto& fx = med_fixture();
  const SourceSentence x(testkit::kTable1Source);
  const auto a = build_augmented(x, retrieve(x, *fx.ctx));
  EXPECT_EQ(a.rendered, testkit::kTable1Augmented);
  EXPECT_EQ(a.rendered.substr(0, a.rendered.find("‖")), x.text);
}

TEST(BuildAugmented, EmptyAndSingleTerm) {
  const SourceSentence x("进行校正");
  EXPECT_EQ(build_augmented(x, {}).rendered, "进行校正");
  RetrievalResult one{{"矫正"}, {1.0}};
  EXPECT_EQ(build_augmented(x, one).rendered, "进行校正‖领域词是矫正");
  EXPECT_EQ(build_augmented(x, one, "||").rendered, "进行校正||领域词是矫正");
}
