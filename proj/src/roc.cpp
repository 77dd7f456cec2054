#include "droidprof/roc.hpp"

#include <algorithm>

#include "droidprof/error.hpp"

namespace droidprof {

std::vector<RocPoint> roc_curve(std::vector<ScoredLabel> scores) {
  std::size_t pos = 0;
  for (const auto& s : scores) pos += s.positive ? 1 : 0;
  const std::size_t neg = scores.size() - pos;
  if (pos == 0 || neg == 0) {
    throw Error(ErrorKind::DegenerateLabels, "ROC needs at least one positive and one negative");
  }

  std::sort(scores.begin(), scores.end(),
            [](const ScoredLabel& a, const ScoredLabel& b) { return a.score > b.score; });

  std::vector<RocPoint> curve{{0.0, 0.0}};
  std::size_t tp = 0, fp = 0;
  for (std::size_t i = 0; i < scores.size();) {
    const double s = scores[i].score;
    for (; i < scores.size() && scores[i].score == s; ++i) {
      if (scores[i].positive) {
        ++tp;
      } else {
        ++fp;
      }
    }
    curve.push_back({static_cast<double>(fp) / static_cast<double>(neg),
                     static_cast<double>(tp) / static_cast<double>(pos)});
  }
  return curve;
}

double roc_auc(const std::vector<ScoredLabel>& scores) {
  const auto curve = roc_curve(scores);
  double area = 0.0;
  for (std::size_t i = 1; i < curve.size(); ++i) {
    area += (curve[i].fpr - curve[i - 1].fpr) * (curve[i].tpr + curve[i - 1].tpr) / 2.0;
  }
  return area;
}

}  // namespace droidprof
