#include <gtest/gtest.h>

#include "droidprof/pattern.hpp"

using droidprof::GlobPattern;

TEST(Pattern, Anchored) {
  GlobPattern p("/sdcard*");
  EXPECT_TRUE(p.matches("/sdcard"));
  EXPECT_TRUE(p.matches("/sdcard/x"));
  EXPECT_FALSE(p.matches("/mnt/sdcard"));
}

TEST(Pattern, StarAndQuestion) {
  EXPECT_TRUE(GlobPattern("a*b*c").matches("aXXbYYc"));
  EXPECT_FALSE(GlobPattern("a*b*c").matches("aXXbYY"));
  EXPECT_TRUE(GlobPattern("a?c").matches("abc"));
  EXPECT_FALSE(GlobPattern("a?c").matches("ac"));
  EXPECT_TRUE(GlobPattern("*").matches(""));
}

TEST(Pattern, AlternationCaptures) {
  GlobPattern p("*CryptoUsage: {DES|AES|Blowfish}*");
  EXPECT_EQ(p.group_count(), 1u);
  auto m = p.match("data CryptoUsage: Blowfish end");
  ASSERT_TRUE(m);
  ASSERT_EQ(m->size(), 1u);
  EXPECT_EQ((*m)[0], "Blowfish");
  EXPECT_FALSE(p.matches("CryptoUsage: RC4"));
}

TEST(Pattern, AlternationBacktracks) {
  GlobPattern p("{ab|a}bc");
  EXPECT_TRUE(p.matches("abc"));
  EXPECT_TRUE(p.matches("abbc"));
}

TEST(Pattern, Escape) {
  EXPECT_TRUE(GlobPattern("a\\*").matches("a*"));
  EXPECT_FALSE(GlobPattern("a\\*").matches("ab"));
}

TEST(Pattern, Invalid) {
  EXPECT_THROW(GlobPattern("{a|b"), std::invalid_argument);
  EXPECT_THROW(GlobPattern("a}"), std::invalid_argument);
  EXPECT_THROW(GlobPattern("a\\"), std::invalid_argument);
}
