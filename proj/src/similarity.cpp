#include "droidprof/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <fmt/format.h>

#include "droidprof/error.hpp"
#include "text.hpp"

namespace droidprof {

namespace {

bool has_premium_target(const BehaviorProfile& p, Factor f) {
  for (const auto& [target, _] : p.targets(f)) {
    if (target.starts_with("Premium-rate")) return true;
  }
  return false;
}

std::string_view strip_scheme(std::string_view url) {
  url = text::trim(url);
  if (auto pos = url.find("://"); pos != std::string_view::npos) url.remove_prefix(pos + 3);
  while (!url.empty() && url.back() == '/') url.remove_suffix(1);
  return url;
}

double exact_match(const BehaviorProfile& a, const BehaviorProfile& b, std::string_view target) {
  auto x = a.attribute(Factor::ConvertingData, target);
  auto y = b.attribute(Factor::ConvertingData, target);
  return x && y && *x == *y ? 1.0 : 0.0;
}

}  // namespace

SimilarityWeights::SimilarityWeights(double ss, double cs, double sis, double cds)
    : ss_(ss), cs_(cs), sis_(sis), cds_(cds) {
  for (double w : {ss, cs, sis, cds}) {
    if (!(w >= 0.0 && w <= 1.0)) {
      throw Error(ErrorKind::InvalidWeights, fmt::format("weight {} outside [0,1]", w));
    }
  }
  const double sum = ss + cs + sis + cds;
  if (std::abs(sum - 1.0) > 1e-9) {
    throw Error(ErrorKind::InvalidWeights, fmt::format("weights sum to {}, not 1", sum));
  }
}

SimilarityWeights SimilarityWeights::normalized(double ss, double cs, double sis, double cds) {
  const double sum = ss + cs + sis + cds;
  if (!(sum > 0.0) || ss < 0 || cs < 0 || sis < 0 || cds < 0) {
    throw Error(ErrorKind::InvalidWeights, "weights must be non-negative with a positive sum");
  }
  // Put the rounding residue on the largest weight so the sum is exact.
  double w[4] = {ss / sum, cs / sum, sis / sum, cds / sum};
  auto* largest = std::max_element(w, w + 4);
  *largest = 1.0 - (w[0] + w[1] + w[2] + w[3] - *largest);
  return SimilarityWeights(w[0], w[1], w[2], w[3]);
}

double SimilarityWeights::of(Factor f) const {
  switch (f) {
    case Factor::SendingSMS: return ss_;
    case Factor::Calling: return cs_;
    case Factor::SendingSensitiveInfo: return sis_;
    case Factor::ConvertingData: return cds_;
  }
  return 0.0;
}

double SimilarityWeights::mass(FactorSet s) const {
  double m = 0.0;
  for (auto f : kAllFactors) {
    if (s.contains(f)) m += of(f);
  }
  return m;
}

double sim_ss(const BehaviorProfile& a, const BehaviorProfile& b) {
  return has_premium_target(a, Factor::SendingSMS) && has_premium_target(b, Factor::SendingSMS)
             ? 1.0
             : 0.0;
}

double sim_cs(const BehaviorProfile& a, const BehaviorProfile& b) {
  return has_premium_target(a, Factor::Calling) && has_premium_target(b, Factor::Calling) ? 1.0
                                                                                          : 0.0;
}

double jaccard(const std::set<std::string>& a, const std::set<std::string>& b) {
  if (a.empty() && b.empty()) return 0.0;
  std::size_t common = 0;
  for (const auto& x : a) common += b.count(x);
  const std::size_t uni = a.size() + b.size() - common;
  return static_cast<double>(common) / static_cast<double>(uni);
}

double sim_sis(const BehaviorProfile& a, const BehaviorProfile& b) {
  return jaccard(a.target_names(Factor::SendingSensitiveInfo),
                 b.target_names(Factor::SendingSensitiveInfo));
}

std::size_t levenshtein(std::string_view a, std::string_view b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

double url_similarity(std::string_view u, std::string_view v) {
  const auto su = strip_scheme(u);
  const auto sv = strip_scheme(v);
  if (su.empty() || sv.empty()) throw Error(ErrorKind::EmptyUrl, "URL is empty");

  const auto lu = text::split(su, '.');
  const auto lv = text::split(sv, '.');
  std::size_t common = 0;
  while (common < lu.size() && common < lv.size() && lu[common] == lv[common]) ++common;

  auto residual = [common](const std::vector<std::string_view>& labels) {
    std::string out;
    for (std::size_t i = common; i < labels.size(); ++i) {
      if (i > common) out += '.';
      out += labels[i];
    }
    return out;
  };
  const auto ru = residual(lu);
  const auto rv = residual(lv);
  const std::size_t longest = std::max(ru.size(), rv.size());
  if (longest == 0) return 1.0;
  return 1.0 - static_cast<double>(levenshtein(ru, rv)) / static_cast<double>(longest);
}

double sim_cds(const BehaviorProfile& a, const BehaviorProfile& b) {
  double url = 0.0;
  auto ua = a.attribute(Factor::ConvertingData, kDestinationUrl);
  auto ub = b.attribute(Factor::ConvertingData, kDestinationUrl);
  if (ua && ub && !strip_scheme(*ua).empty() && !strip_scheme(*ub).empty()) {
    url = url_similarity(*ua, *ub);
  }
  return (url + exact_match(a, b, kCipherAlgorithm) + exact_match(a, b, kEncodingAlgorithm)) / 3.0;
}

SimilarityBreakdown total_similarity(const BehaviorProfile& a, const BehaviorProfile& b,
                                     const SimilarityWeights& w) {
  SimilarityBreakdown r;
  r.ss = sim_ss(a, b);
  r.cs = sim_cs(a, b);
  r.sis = sim_sis(a, b);
  r.cds = sim_cds(a, b);
  r.total = std::clamp(w.ss() * r.ss + w.cs() * r.cs + w.sis() * r.sis + w.cds() * r.cds, 0.0, 1.0);
  return r;
}

}  // namespace droidprof
