#include <set>

#include <gtest/gtest.h>

#include "droidprof/category.hpp"

using namespace droidprof;

namespace {

std::size_t binomial(std::size_t n, std::size_t k) {
  std::size_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

TEST(Category, FifteenMaliciousPlusBenign) {
  const auto all = enumerate_categories();
  std::size_t nonempty = 0;
  for (std::size_t k = 1; k <= 4; ++k) nonempty += binomial(4, k);
  ASSERT_EQ(nonempty, 15u);
  ASSERT_EQ(all.size(), nonempty + 1);

  std::set<std::uint8_t> seen;
  std::size_t benign = 0;
  for (const auto& c : all) {
    seen.insert(c.factors.bits());
    benign += c.is_benign;
  }
  EXPECT_EQ(seen.size(), all.size());
  EXPECT_EQ(benign, 2u);  // {} and {CDS}
  EXPECT_TRUE(all.back().factors.empty());
  std::size_t malicious = 0;
  for (const auto& c : all) malicious += !c.factors.empty();
  EXPECT_EQ(malicious, 15u);
}

TEST(Category, CdsOnlyIsBenign) {
  BehaviorProfile p;
  p.add(Factor::ConvertingData, "Encoding algorithm", "gzip");
  const auto c = categorize(p);
  EXPECT_TRUE(c.is_benign);
  EXPECT_EQ(c.factors, FactorSet{Factor::ConvertingData});
  EXPECT_EQ(render_category(c), "BENIGN");
  EXPECT_EQ(render_factors(c.factors), "CDS");
  p.add(Factor::SendingSensitiveInfo, "IMEI", "1");
  EXPECT_FALSE(categorize(p).is_benign);
  EXPECT_EQ(render_category(categorize(p)), "SIS+CDS");
}

TEST(Category, RenderParseRoundTrip) {
  for (const auto& c : enumerate_categories()) {
    const auto text = render_factors(c.factors);
    EXPECT_EQ(parse_factors(text), c.factors) << text;
  }
  EXPECT_EQ(parse_factors("BENIGN"), FactorSet{});
  EXPECT_FALSE(parse_factors("SS+XX").has_value());
  EXPECT_FALSE(parse_factors("SS+SS").has_value());
}

TEST(Category, FactorSetBasics) {
  FactorSet s{Factor::SendingSMS, Factor::ConvertingData};
  EXPECT_EQ(s.size(), 2);
  EXPECT_TRUE(s.contains(Factor::SendingSMS));
  EXPECT_FALSE(s.contains(Factor::Calling));
  EXPECT_EQ(s.bits(), 0b1001);
}
