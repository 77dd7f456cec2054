#include <filesystem>

#include <gtest/gtest.h>

#include "droidprof/error.hpp"
#include "droidprof/synth.hpp"

using namespace droidprof;

namespace {

ErrorKind spec_error(const CorpusSpec& spec) {
  try {
    generate_corpus(spec);
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "spec accepted";
  return ErrorKind::MalformedLine;
}

}  // namespace

TEST(Synth, DefaultSpecProportions) {
  const auto spec = default_paper_spec();
  std::size_t malware = 0, adwo = 0;
  for (const auto& [t, n] : spec.templates) {
    malware += n;
    if (t.name == "AdWo") adwo = n;
  }
  EXPECT_EQ(malware, 81u);
  EXPECT_NEAR(double(adwo) / double(malware), 401.0 / 643.0, 0.03);
  const double ratio = double(spec.benign_count) / double(malware);
  EXPECT_NEAR(ratio, 8840.0 / 643.0, 0.1 * 8840.0 / 643.0);
}

TEST(Synth, GeneratorAgreesWithProfiler) {
  for (bool boxer_error : {false, true}) {
    const auto samples = generate_samples(default_paper_spec(boxer_error), 2);
    ASSERT_EQ(samples.size(), 1181u);
    for (const auto& g : samples) {
      const auto p = build_profile(g.sample.log, default_rules());
      const auto c = categorize(p);
      EXPECT_EQ(c.factors, g.factors) << g.sample.truth << " " << g.variant;
      EXPECT_EQ(p.target_names(Factor::SendingSensitiveInfo), g.sis_targets) << g.sample.truth;
      if (g.sample.truth == kBenignLabel) EXPECT_TRUE(c.is_benign);
    }
  }
}

TEST(Synth, BoxerConnectionErrorDropsSms) {
  for (const auto& g : generate_samples(default_paper_spec(true))) {
    if (g.sample.truth == "Boxer") EXPECT_FALSE(g.factors.contains(Factor::SendingSMS));
  }
}

TEST(Synth, AirPushSplitsEvenly) {
  CorpusSpec spec = default_paper_spec();
  spec.templates = {{spec.templates[1].first, 60}};
  spec.benign_count = 0;
  std::map<std::string, int> by_variant;
  for (const auto& g : generate_samples(spec)) ++by_variant[g.variant];
  EXPECT_EQ(by_variant["sms+sis"], 30);
  EXPECT_EQ(by_variant["sis"], 30);
}

TEST(Synth, BenignCdsFraction) {
  std::size_t cds = 0, benign = 0;
  for (const auto& g : generate_samples(default_paper_spec())) {
    if (g.sample.truth != kBenignLabel) continue;
    ++benign;
    cds += g.factors.contains(Factor::ConvertingData);
  }
  EXPECT_EQ(benign, 1100u);
  EXPECT_EQ(cds, 55u);
}

TEST(Synth, DeterministicAcrossJobs) {
  const auto spec = default_paper_spec();
  const auto a = generate_corpus(spec, 1), b = generate_corpus(spec, 4);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].log, b[i].log);
    EXPECT_EQ(a[i].truth, b[i].truth);
  }
  auto other = spec;
  other.seed = 8;
  EXPECT_NE(generate_corpus(other)[0].log.sample_id(), a[0].log.sample_id());
}

TEST(Synth, FakeBattScarHeavierOpenClose) {
  double fbs = 0, rest = 0;
  std::size_t nf = 0, nr = 0;
  for (const auto& g : generate_samples(default_paper_spec())) {
    std::size_t opens = 0;
    for (const auto& r : g.sample.log.records()) opens += r.name == "open";
    (g.sample.truth == "FakeBattScar" ? fbs : rest) += double(opens);
    ++(g.sample.truth == "FakeBattScar" ? nf : nr);
  }
  EXPECT_GT(fbs / double(nf), 4 * rest / double(nr));
}

TEST(Synth, CorpusDirRoundTrip) {
  auto spec = default_paper_spec();
  spec.templates.resize(2);
  spec.benign_count = 5;
  const auto corpus = generate_corpus(spec);
  const auto dir = std::filesystem::temp_directory_path() / "droidprof_synth_roundtrip";
  std::filesystem::remove_all(dir);
  write_corpus_dir(corpus, dir.string());
  const auto back = load_corpus_dir(dir.string());
  ASSERT_EQ(back.size(), corpus.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    EXPECT_EQ(back[i].log, corpus[i].log);
    EXPECT_EQ(back[i].truth, corpus[i].truth);
  }
  std::filesystem::remove_all(dir);
}

TEST(Synth, InvalidSpecs) {
  const auto base = default_paper_spec();

  auto zero = base;
  zero.templates[0].second = 0;
  EXPECT_EQ(spec_error(zero), ErrorKind::InvalidSpec);

  auto probs = base;
  probs.templates[1].first.variants[0].probability = 0.7;
  EXPECT_EQ(spec_error(probs), ErrorKind::InvalidSpec);

  auto unknown = base;
  unknown.templates[0].first.variants[0].sis_targets.insert("Horoscope");
  EXPECT_EQ(spec_error(unknown), ErrorKind::InvalidSpec);

  auto inconsistent = base;
  inconsistent.templates[2].first.variants[0].factors.insert(Factor::ConvertingData);
  EXPECT_EQ(spec_error(inconsistent), ErrorKind::InvalidSpec);

  auto duplicate = base;
  duplicate.templates.push_back(duplicate.templates[0]);
  EXPECT_EQ(spec_error(duplicate), ErrorKind::InvalidSpec);

  auto malicious_benign = base;
  malicious_benign.benign.variants[0].factors.insert(Factor::SendingSMS);
  EXPECT_EQ(spec_error(malicious_benign), ErrorKind::InvalidSpec);

  EXPECT_EQ(spec_error(CorpusSpec{}), ErrorKind::InvalidSpec);
}
