#pragma once

#include <vector>

namespace droidprof {

struct ScoredLabel {
  double score;
  bool positive;
};

struct RocPoint {
  double fpr;
  double tpr;
};

// ROC curve swept from the highest score down; samples with equal scores are
// added in one step, so ties produce a diagonal segment.
std::vector<RocPoint> roc_curve(std::vector<ScoredLabel> scores);

// Trapezoidal area under roc_curve. Throws Error(DegenerateLabels) unless
// both classes are present.
double roc_auc(const std::vector<ScoredLabel>& scores);

}  // namespace droidprof
