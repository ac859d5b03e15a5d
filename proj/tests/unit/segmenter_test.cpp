#include <gtest/gtest.h>

#include <random>

#include "rspell/segmenter.hpp"

using namespace rspell;

namespace {

std::vector<std::string> texts(const Segmentation& s) { return s.texts(); }
using V = std::vector<std::string>;

}  // namespace

TEST(SegmentDict, BuildDedupAndMaxLen) {
  const auto d = build_segment_dict({"弱视", "配镜"});
  EXPECT_EQ(d.size(), 2u);
  EXPECT_EQ(d.max_word_len(), 2u);
  EXPECT_EQ(build_segment_dict(std::vector<std::string>{}).size(), 0u);
  EXPECT_EQ(build_segment_dict(std::vector<std::string>{}).max_word_len(), 0u);
  EXPECT_EQ(build_segment_dict({"配镜", "配镜"}).size(), 1u);
  EXPECT_EQ(build_segment_dict({"医学验光", "配"}).max_word_len(), 4u);
}

TEST(Segment, ExactCover) {
  EXPECT_EQ(texts(segment("治疗弱视", build_segment_dict({"治疗", "弱视"}))), (V{"治疗", "弱视"}));
}

TEST(Segment, OovFallsBackToSingleChars) {
  EXPECT_EQ(texts(segment("弱视采用", build_segment_dict({"弱视"}))), (V{"弱视", "采", "用"}));
}

TEST(Segment, LongestMatchWins) {
  const auto d = build_segment_dict({"医学", "医学验光", "配镜", "验光"});
  EXPECT_EQ(texts(segment("医学验光配镜", d)), (V{"医学验光", "配镜"}));
}

TEST(Segment, BackwardWinsWithFewerWords) {
  // forward: 研究生 命 起源 (3), backward: 研究 生命 起源 (3) with fewer singles
  const auto d = build_segment_dict({"研究", "研究生", "生命", "起源"});
  EXPECT_EQ(texts(segment("研究生命起源", d)), (V{"研究", "生命", "起源"}));
}

TEST(Segment, PunctuationAndLatinRunsAreTokens) {
  const auto d = build_segment_dict({"治疗", "弱视"});
  const auto s = segment("治疗CT扫描，弱视。", d);
  EXPECT_EQ(texts(s), (V{"治疗", "CT", "扫", "描", "，", "弱视", "。"}));
  EXPECT_EQ(s.words[1].kind, TokenKind::kLatin);
  EXPECT_EQ(s.words[4].kind, TokenKind::kPunct);
  EXPECT_EQ(s.words[6].kind, TokenKind::kPunct);
  EXPECT_EQ(s.words[5].begin, 7u);
  EXPECT_EQ(s.words[5].length, 2u);
}

TEST(Segment, EmptyInput) { EXPECT_TRUE(segment("", build_segment_dict({"配镜"})).words.empty()); }

TEST(Segment, LosslessCoverAndDictMembership) {
  const auto d = build_segment_dict({"弱视", "配镜", "医学", "医学验光", "验光", "矫正", "校正", "治疗", "进行"});
  const std::u32string alphabet = U"弱视配镜医学验光矫正校治疗进行来采用，。aB1😀";
  std::mt19937 rng(11);
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1), len(0, 30);
  for (int trial = 0; trial < 2000; ++trial) {
    std::u32string s;
    for (std::size_t i = len(rng); i > 0; --i) s.push_back(alphabet[pick(rng)]);
    const auto seg = segment(std::u32string_view(s), d);
    ASSERT_EQ(seg.joined(), utf8::encode(s));
    std::size_t pos = 0;
    for (const auto& tok : seg.words) {
      ASSERT_EQ(tok.begin, pos);
      pos += tok.length;
      if (tok.kind == TokenKind::kWord && tok.length > 1) {
        EXPECT_TRUE(d.contains(tok.text)) << tok.text;
      }
    }
    EXPECT_EQ(texts(segment(std::u32string_view(s), d)), texts(seg));
  }
}
