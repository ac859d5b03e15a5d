#include <gtest/gtest.h>

#include "rspell/utf8.hpp"

using namespace rspell;

TEST(Utf8, RoundTripsMixedText) {
  const std::string s = "治疗ab‖领域。😀";
  const std::u32string cps = utf8::decode(s);
  EXPECT_EQ(cps.size(), 9u);
  EXPECT_EQ(cps[4], U'‖');
  EXPECT_EQ(cps[8], U'😀');
  EXPECT_EQ(utf8::encode(cps), s);
}

TEST(Utf8, MalformedBytesBecomeReplacement) {
  const std::string bad = std::string("a") + char(0xE6) + "b";
  const auto cps = utf8::decode(bad);
  ASSERT_EQ(cps.size(), 3u);
  EXPECT_EQ(cps[1], utf8::kReplacement);
}

TEST(Utf8, Classifiers) {
  EXPECT_TRUE(utf8::is_punct(U'。'));
  EXPECT_TRUE(utf8::is_punct(U'，'));
  EXPECT_TRUE(utf8::is_punct(U'‖'));
  EXPECT_FALSE(utf8::is_punct(U'校'));
  EXPECT_TRUE(utf8::is_latin(U'a'));
  EXPECT_TRUE(utf8::is_latin(U'７'));
  EXPECT_TRUE(utf8::is_word_char(U'校'));
  EXPECT_TRUE(utf8::is_cjk(U'校'));
  EXPECT_FALSE(utf8::is_cjk(U'a'));
}
