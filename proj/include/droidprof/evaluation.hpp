#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "droidprof/classifier.hpp"
#include "droidprof/corpus.hpp"
#include "droidprof/profile.hpp"
#include "droidprof/rules.hpp"

namespace droidprof {

inline constexpr std::string_view kUnknownLabel = "UNKNOWN";

struct Fold {
  std::vector<std::size_t> train;  // corpus indices in streaming order
  std::vector<std::size_t> test;
};

// Stratified k-fold partition. Each label's samples are shuffled and dealt
// round-robin, continuing the rotation across labels so fold sizes differ by
// at most one. Throws Error(InsufficientSamples) when a label has fewer than
// k samples, Error(InvalidSpec) for k < 2.
std::vector<Fold> kfold_split(const LabeledCorpus& corpus, std::size_t k, std::uint64_t seed);

enum class Alignment { Majority, Hungarian };

std::string_view to_string(Alignment a);
std::optional<Alignment> parse_alignment(std::string_view s);

struct EvaluationOptions {
  std::size_t folds = 5;
  std::uint64_t seed = 7;
  Alignment alignment = Alignment::Majority;
  unsigned jobs = 1;
};

struct LabelMetrics {
  std::size_t samples = 0;
  std::size_t hits = 0;
  double accuracy = 0;
  std::optional<double> auc;  // absent when the label has no negatives
  std::size_t clusters = 0;   // groups its samples were spread over
};

struct EvaluationReport {
  std::vector<std::string> labels;  // sorted truth labels
  std::map<std::string, LabelMetrics> per_label;
  double overall_accuracy = 0;
  std::optional<double> macro_auc;
  // Rows follow `labels`; columns follow `labels` then UNKNOWN.
  std::vector<std::vector<std::size_t>> confusion;
  std::size_t malware_clusters = 0;
  std::size_t benign_clusters = 0;
};

// One profile per corpus sample, in corpus order.
std::vector<BehaviorProfile> profile_corpus(const LabeledCorpus& corpus, const RuleSet& rules, unsigned jobs = 1);

// Per fold: stream the training samples through classify, label each cluster
// with its aligned truth label, then predict each test sample from the
// best-scoring representative (UNKNOWN below threshold, BENIGN for
// benign-categorized samples). Accuracy pools all test predictions. Cluster
// counts come from one streaming pass over the whole corpus.
EvaluationReport run_evaluation(const LabeledCorpus& corpus, const std::vector<BehaviorProfile>& profiles,
                                const ClassifierConfig& cfg, const EvaluationOptions& opts);
EvaluationReport run_evaluation(const LabeledCorpus& corpus, const RuleSet& rules, const ClassifierConfig& cfg,
                                const EvaluationOptions& opts);

struct BaselineOptions {
  std::size_t k = 0;  // 0: number of labels
  bool l1_normalize = false;
  std::size_t restarts = 10;
  std::size_t max_iter = 100;
};

// Crowdroid-style baseline with the same folds: k-means on the training
// syscall-frequency vectors, clusters aligned to labels, test samples
// predicted from the nearest centroid.
EvaluationReport evaluate_baseline(const LabeledCorpus& corpus, const BaselineOptions& baseline,
                                   const EvaluationOptions& opts);

struct TuneRow {
  SimilarityWeights weights;
  std::size_t malware_clusters = 0;
  std::size_t benign_clusters = 0;
  double accuracy = 0;
};

struct TuneResult {
  std::vector<TuneRow> rows;
  // First row from which accuracy stops moving in the direction it had; the
  // last row when the direction never changes.
  std::size_t stop_row = 0;
};

// Six rows from (0.25, 0.25, 0.25, 0.25) shifting weight onto SS and CS.
std::vector<SimilarityWeights> default_weight_schedule();

TuneResult tune_weights(const LabeledCorpus& corpus, const std::vector<BehaviorProfile>& profiles,
                        const std::vector<SimilarityWeights>& schedule, const ClassifierConfig& base,
                        const EvaluationOptions& opts);

struct GateThresholds {
  double overall = 0.98;
  double benign = 0.95;
  double family = 1.0;
};

// Human-readable descriptions of failed gates; empty when all pass.
std::vector<std::string> check_gates(const EvaluationReport& r, const GateThresholds& g = {});

std::string render_machine(const EvaluationReport& r);
std::string render_human(const EvaluationReport& r);
std::string render_machine(const TuneResult& t);
std::string render_human(const TuneResult& t);

// Maximum-weight one-to-one matching of rows to columns of `weights`
// (rows x cols). Returns the matched column per row, or nullopt.
std::vector<std::optional<std::size_t>> hungarian_max(const std::vector<std::vector<double>>& weights);

}  // namespace droidprof
