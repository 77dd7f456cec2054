#include <random>

#include <gtest/gtest.h>

#include "droidprof/error.hpp"
#include "droidprof/similarity.hpp"
#include "oracles.hpp"

using namespace droidprof;

namespace {

BehaviorProfile full_profile(const std::string& host) {
  BehaviorProfile p;
  p.add(Factor::SendingSMS, "Premium-rate SMS", "1066");
  p.add(Factor::Calling, "Premium-rate number", "1590");
  p.add(Factor::SendingSensitiveInfo, "IMEI", "1");
  p.add(Factor::ConvertingData, std::string(kDestinationUrl), host);
  p.add(Factor::ConvertingData, std::string(kCipherAlgorithm), "AES");
  p.add(Factor::ConvertingData, std::string(kEncodingAlgorithm), "gzip");
  return p;
}

std::string random_host(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> labels(1, 6), len(1, 12), ch(0, 3);
  const char alphabet[] = "abcd";
  std::string h;
  for (int l = labels(rng); l > 0; --l) {
    if (!h.empty()) h += '.';
    for (int n = len(rng); n > 0; --n) h += alphabet[ch(rng)];
  }
  return h;
}

}  // namespace

TEST(Similarity, JaccardMatchesOracle) {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> size(0, 20), item(0, 30);
  for (int i = 0; i < 500; ++i) {
    std::set<std::string> a, b;
    for (int n = size(rng); n > 0; --n) a.insert("t" + std::to_string(item(rng)));
    for (int n = size(rng); n > 0; --n) b.insert("t" + std::to_string(item(rng)));
    EXPECT_NEAR(jaccard(a, b), oracle::jaccard(a, b), 1e-12);
    EXPECT_DOUBLE_EQ(jaccard(a, b), jaccard(b, a));
  }
  EXPECT_EQ(jaccard({}, {}), 0.0);
}

TEST(Similarity, LevenshteinMatchesOracle) {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<int> len(0, 15), ch(0, 2);
  for (int i = 0; i < 500; ++i) {
    std::string a, b;
    for (int n = len(rng); n > 0; --n) a += char('x' + ch(rng));
    for (int n = len(rng); n > 0; --n) b += char('x' + ch(rng));
    EXPECT_EQ(levenshtein(a, b), oracle::edit_distance(a, b)) << a << " / " << b;
  }
  EXPECT_EQ(levenshtein("kitten", "sitting"), 3u);
}

TEST(Similarity, UrlMatchesOracle) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 500; ++i) {
    const auto u = random_host(rng), v = random_host(rng);
    EXPECT_NEAR(url_similarity(u, v), oracle::url_similarity(u, v), 1e-12) << u << " / " << v;
  }
}

TEST(Similarity, UrlRules) {
  EXPECT_DOUBLE_EQ(url_similarity("http://ads.adwo.com/", "ads.adwo.com"), 1.0);
  EXPECT_DOUBLE_EQ(url_similarity("client.mustmobile.net", "client.mustmobile.com"), 0.0);
  EXPECT_NEAR(url_similarity("ads1.adwo.com", "ads2.adwo.com"), 12.0 / 13.0, 1e-12);
  EXPECT_NEAR(url_similarity("a.bcd", "a.bce"), 2.0 / 3.0, 1e-12);
  EXPECT_DOUBLE_EQ(url_similarity("abc", "xyz"), 0.0);
  EXPECT_THROW(url_similarity("", "a.com"), Error);
  EXPECT_THROW(url_similarity("http://", "a.com"), Error);
}

TEST(Similarity, EquationValues) {
  const SimilarityWeights w;
  const auto a = full_profile("ads.adwo.com"), b = full_profile("ads.adwo.com");
  EXPECT_NEAR(total_similarity(a, b, w).total, 1.0, 1e-9);

  BehaviorProfile s, t;
  for (auto* p : {&s, &t}) {
    p->add(Factor::SendingSensitiveInfo, "IMEI", "1");
    p->add(Factor::ConvertingData, std::string(kDestinationUrl), "a.com");
    p->add(Factor::ConvertingData, std::string(kCipherAlgorithm), "DES");
    p->add(Factor::ConvertingData, std::string(kEncodingAlgorithm), "gzip");
  }
  const auto r = total_similarity(s, t, w);
  EXPECT_NEAR(r.total, 0.34, 1e-9);
  EXPECT_EQ(r.ss, 0.0);
  EXPECT_EQ(r.sis, 1.0);
  EXPECT_EQ(r.cds, 1.0);
}

TEST(Similarity, CdsComponents) {
  BehaviorProfile a, b;
  a.add(Factor::ConvertingData, std::string(kCipherAlgorithm), "AES");
  b.add(Factor::ConvertingData, std::string(kCipherAlgorithm), "DES");
  a.add(Factor::ConvertingData, std::string(kEncodingAlgorithm), "gzip");
  EXPECT_EQ(sim_cds(a, b), 0.0);
  b.add(Factor::ConvertingData, std::string(kEncodingAlgorithm), "gzip");
  EXPECT_NEAR(sim_cds(a, b), 1.0 / 3.0, 1e-12);
}

TEST(Similarity, PremiumRateOnly) {
  BehaviorProfile a, b;
  a.add(Factor::SendingSMS, "Premium-rate SMS", "1");
  b.add(Factor::SendingSMS, "Ordinary SMS", "1");
  EXPECT_EQ(sim_ss(a, b), 0.0);
  b.add(Factor::SendingSMS, "Premium-rate SMS", "2");
  EXPECT_EQ(sim_ss(a, b), 1.0);
  EXPECT_EQ(sim_cs(a, b), 0.0);
}

TEST(Similarity, SymmetricAndBounded) {
  std::mt19937_64 rng(4);
  std::bernoulli_distribution coin(0.5);
  const std::vector<std::string> targets = {"IMEI", "IMSI", "MCC", "UID", "Carrier"};
  auto random_profile = [&] {
    BehaviorProfile p;
    if (coin(rng)) p.add(Factor::SendingSMS, "Premium-rate SMS", "1");
    if (coin(rng)) p.add(Factor::Calling, "Premium-rate number", "1");
    for (const auto& t : targets) {
      if (coin(rng)) p.add(Factor::SendingSensitiveInfo, t, "v");
    }
    if (coin(rng)) p.add(Factor::ConvertingData, std::string(kDestinationUrl), random_host(rng));
    if (coin(rng)) p.add(Factor::ConvertingData, std::string(kCipherAlgorithm), coin(rng) ? "AES" : "DES");
    return p;
  };
  const SimilarityWeights w(0.25, 0.25, 0.25, 0.25);
  for (int i = 0; i < 300; ++i) {
    const auto a = random_profile(), b = random_profile();
    const double ab = total_similarity(a, b, w).total;
    EXPECT_DOUBLE_EQ(ab, total_similarity(b, a, w).total);
    EXPECT_GE(ab, 0.0);
    EXPECT_LE(ab, 1.0);
  }
}

TEST(Similarity, WeightsValidation) {
  EXPECT_THROW(SimilarityWeights(0.5, 0.5, 0.5, 0.5), Error);
  EXPECT_THROW(SimilarityWeights(-0.1, 0.5, 0.3, 0.3), Error);
  EXPECT_NO_THROW(SimilarityWeights(1, 0, 0, 0));
  const auto n = SimilarityWeights::normalized(1, 1, 1, 1);
  EXPECT_DOUBLE_EQ(n.sis(), 0.25);
  EXPECT_THROW(SimilarityWeights::normalized(0, 0, 0, 0), Error);
  EXPECT_NEAR(SimilarityWeights().mass(FactorSet{Factor::SendingSensitiveInfo, Factor::ConvertingData}), 0.34, 1e-12);
}
