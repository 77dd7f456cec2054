#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "droidprof/error.hpp"
#include "droidprof/evaluation.hpp"
#include "droidprof/synth.hpp"

using namespace droidprof;

namespace {

LabeledCorpus toy_corpus(std::size_t per_label, std::size_t labels) {
  std::vector<LabeledSample> samples;
  for (std::size_t l = 0; l < labels; ++l) {
    for (std::size_t i = 0; i < per_label; ++i) {
      const auto id = "s" + std::to_string(l) + "-" + std::to_string(i);
      samples.push_back({IntegratedSystemLog(id, {SyscallRecord::make("read", {id})}, {}), "L" + std::to_string(l)});
    }
  }
  return LabeledCorpus(std::move(samples));
}

CorpusSpec small_spec() {
  auto spec = default_paper_spec();
  spec.templates[0].second = 10;  // AdWo
  spec.benign_count = 60;
  return spec;
}

double brute_force_matching(const std::vector<std::vector<double>>& w) {
  const std::size_t rows = w.size(), cols = w[0].size();
  std::vector<std::size_t> perm(std::max(rows, cols));
  std::iota(perm.begin(), perm.end(), 0);
  double best = 0;
  do {
    double s = 0;
    for (std::size_t i = 0; i < rows; ++i) {
      if (perm[i] < cols) s += w[i][perm[i]];
    }
    best = std::max(best, s);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace

TEST(KFold, PartitionArithmetic) {
  const auto corpus = toy_corpus(20, 5);
  const auto folds = kfold_split(corpus, 5, 1);
  ASSERT_EQ(folds.size(), 5u);
  std::vector<int> seen(corpus.size(), 0);
  for (const auto& f : folds) {
    EXPECT_EQ(f.test.size(), 20u);
    EXPECT_EQ(f.train.size() + f.test.size(), corpus.size());
    for (auto i : f.test) ++seen[i];
    std::map<std::string, int> per_label;
    for (auto i : f.test) ++per_label[corpus[i].truth];
    for (const auto& [_, n] : per_label) EXPECT_EQ(n, 4);
  }
  for (int s : seen) EXPECT_EQ(s, 1);
}

TEST(KFold, StratifiedWithinOne) {
  const auto corpus = toy_corpus(7, 3);  // 21 samples, 7 per label
  for (const auto& f : kfold_split(corpus, 5, 3)) {
    std::map<std::string, int> per_label;
    for (auto i : f.test) ++per_label[corpus[i].truth];
    for (const auto& [_, n] : per_label) {
      EXPECT_GE(n, 1);
      EXPECT_LE(n, 2);
    }
    EXPECT_GE(f.test.size(), 4u);
    EXPECT_LE(f.test.size(), 5u);
  }
}

TEST(KFold, DeterministicAndSeedSensitive) {
  const auto corpus = toy_corpus(10, 2);
  const auto a = kfold_split(corpus, 5, 9), b = kfold_split(corpus, 5, 9), c = kfold_split(corpus, 5, 10);
  for (std::size_t f = 0; f < 5; ++f) {
    EXPECT_EQ(a[f].test, b[f].test);
    EXPECT_EQ(a[f].train, b[f].train);
  }
  bool differs = false;
  for (std::size_t f = 0; f < 5; ++f) differs |= a[f].test != c[f].test;
  EXPECT_TRUE(differs);
}

TEST(KFold, InsufficientSamples) {
  try {
    kfold_split(toy_corpus(4, 2), 5, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InsufficientSamples);
  }
  EXPECT_THROW(kfold_split(toy_corpus(4, 2), 1, 1), Error);
}

TEST(Corpus, UniqueIds) {
  std::vector<LabeledSample> s = {{IntegratedSystemLog("a", {SyscallRecord::make("read", {})}, {}), "X"},
                                  {IntegratedSystemLog("a", {SyscallRecord::make("read", {})}, {}), "Y"}};
  EXPECT_THROW(LabeledCorpus{s}, Error);
}

TEST(Hungarian, MatchesBruteForce) {
  std::mt19937_64 rng(12);
  std::uniform_int_distribution<int> dim(1, 6), val(0, 9);
  for (int t = 0; t < 200; ++t) {
    const int r = dim(rng), c = dim(rng);
    std::vector<std::vector<double>> w(r, std::vector<double>(c));
    for (auto& row : w) {
      for (auto& x : row) x = val(rng);
    }
    const auto m = hungarian_max(w);
    double total = 0;
    std::set<std::size_t> used;
    for (int i = 0; i < r; ++i) {
      if (!m[i]) continue;
      EXPECT_TRUE(used.insert(*m[i]).second);
      total += w[i][*m[i]];
    }
    EXPECT_DOUBLE_EQ(total, brute_force_matching(w));
  }
}

TEST(Evaluation, ConfusionConsistent) {
  const auto corpus = generate_corpus(small_spec());
  const auto r = run_evaluation(corpus, default_rules(), ClassifierConfig{}, EvaluationOptions{});
  std::size_t trace = 0, total = 0;
  for (std::size_t i = 0; i < r.labels.size(); ++i) {
    const auto row = std::accumulate(r.confusion[i].begin(), r.confusion[i].end(), std::size_t{0});
    EXPECT_EQ(row, r.per_label.at(r.labels[i]).samples);
    trace += r.confusion[i][i];
    total += row;
  }
  EXPECT_EQ(total, corpus.size());
  EXPECT_DOUBLE_EQ(r.overall_accuracy, double(trace) / double(total));
  for (const auto& [_, m] : r.per_label) {
    EXPECT_GE(m.accuracy, 0.0);
    EXPECT_LE(m.accuracy, 1.0);
    ASSERT_TRUE(m.auc);
    EXPECT_GE(*m.auc, 0.0);
    EXPECT_LE(*m.auc, 1.0);
  }
}

TEST(Evaluation, AllBenignCorpus) {
  CorpusSpec spec;
  spec.benign = default_paper_spec().benign;
  spec.benign_count = 40;
  const auto corpus = generate_corpus(spec);
  const auto r = run_evaluation(corpus, default_rules(), ClassifierConfig{}, EvaluationOptions{});
  EXPECT_DOUBLE_EQ(r.per_label.at("BENIGN").accuracy, 1.0);
  EXPECT_FALSE(r.per_label.at("BENIGN").auc.has_value());
  EXPECT_EQ(r.malware_clusters, 0u);
  EXPECT_EQ(render_machine(r), "BENIGN|1.0000|-\nOVERALL|1.0000|-\n@clusters|BENIGN|0\n@clusters|MALWARE|0\n");
}

TEST(Evaluation, JobsDoNotChangeResults) {
  const auto corpus = generate_corpus(small_spec());
  EvaluationOptions one, four;
  four.jobs = 4;
  EXPECT_EQ(render_machine(run_evaluation(corpus, default_rules(), ClassifierConfig{}, one)),
            render_machine(run_evaluation(corpus, default_rules(), ClassifierConfig{}, four)));
  EXPECT_EQ(render_machine(evaluate_baseline(corpus, BaselineOptions{}, one)),
            render_machine(evaluate_baseline(corpus, BaselineOptions{}, four)));
}

TEST(Evaluation, Gates) {
  EvaluationReport r;
  r.labels = {"BENIGN", "Fam"};
  r.per_label["BENIGN"].accuracy = 0.96;
  r.per_label["Fam"].accuracy = 1.0;
  r.overall_accuracy = 0.99;
  EXPECT_TRUE(check_gates(r).empty());
  r.per_label["Fam"].accuracy = 0.9;
  r.per_label["BENIGN"].accuracy = 0.9;
  r.overall_accuracy = 0.5;
  EXPECT_EQ(check_gates(r).size(), 3u);
}

TEST(Tune, ScheduleShape) {
  const auto s = default_weight_schedule();
  ASSERT_EQ(s.size(), 6u);
  EXPECT_EQ(s.front(), SimilarityWeights(0.25, 0.25, 0.25, 0.25));
  EXPECT_EQ(s[4], SimilarityWeights());
  for (std::size_t i = 1; i < s.size(); ++i) {
    EXPECT_GT(s[i].ss(), s[i - 1].ss());
    EXPECT_LT(s[i].cds(), s[i - 1].cds());
  }
}

TEST(Tune, OneRowAndRepeatedRows) {
  const auto corpus = generate_corpus(small_spec());
  const auto profiles = profile_corpus(corpus, default_rules());
  const SimilarityWeights w(0.25, 0.25, 0.25, 0.25);
  const auto one = tune_weights(corpus, profiles, {w}, ClassifierConfig{}, EvaluationOptions{});
  ASSERT_EQ(one.rows.size(), 1u);
  EXPECT_EQ(one.stop_row, 0u);
  const auto two = tune_weights(corpus, profiles, {w, w}, ClassifierConfig{}, EvaluationOptions{});
  ASSERT_EQ(two.rows.size(), 2u);
  EXPECT_EQ(two.rows[0].accuracy, two.rows[1].accuracy);
  EXPECT_EQ(two.rows[0].malware_clusters, two.rows[1].malware_clusters);
  EXPECT_EQ(two.rows[0].benign_clusters, two.rows[1].benign_clusters);
}

TEST(Tune, StopRowWhereTendencyChanges) {
  // Accuracy is flat on an all-benign corpus, so the direction never changes.
  CorpusSpec spec;
  spec.benign = default_paper_spec().benign;
  spec.benign_count = 20;
  const auto corpus = generate_corpus(spec);
  const auto t = tune_weights(corpus, profile_corpus(corpus, default_rules()), default_weight_schedule(),
                              ClassifierConfig{}, EvaluationOptions{});
  EXPECT_EQ(t.stop_row, 5u);
  EXPECT_EQ(render_machine(t).substr(0, 27), "0.25,0.25,0.25,0.25|0|0|1.0");
}
