#pragma once

#include <set>
#include <string>
#include <string_view>

#include "droidprof/category.hpp"
#include "droidprof/profile.hpp"

namespace droidprof {

inline constexpr std::string_view kDestinationUrl = "Destination URL";
inline constexpr std::string_view kCipherAlgorithm = "Cipher algorithm";
inline constexpr std::string_view kEncodingAlgorithm = "Encoding algorithm";

class SimilarityWeights {
 public:
  // Default operating point: SS 0.33, CS 0.33, SIS 0.21, CDS 0.13.
  SimilarityWeights() : SimilarityWeights(0.33, 0.33, 0.21, 0.13) {}
  // Throws Error(InvalidWeights) unless every weight is in [0,1] and the sum
  // is 1 within 1e-9.
  SimilarityWeights(double ss, double cs, double sis, double cds);

  // Rescales arbitrary non-negative weights to sum to 1.
  static SimilarityWeights normalized(double ss, double cs, double sis, double cds);

  double ss() const { return ss_; }
  double cs() const { return cs_; }
  double sis() const { return sis_; }
  double cds() const { return cds_; }
  double of(Factor f) const;
  // Total weight of the factors in `s`.
  double mass(FactorSet s) const;

  friend bool operator==(const SimilarityWeights&, const SimilarityWeights&) = default;

 private:
  double ss_, cs_, sis_, cds_;
};

struct SimilarityBreakdown {
  double ss = 0;
  double cs = 0;
  double sis = 0;
  double cds = 0;
  double total = 0;
};

// 1 iff both profiles send SMS to a premium-rate target.
double sim_ss(const BehaviorProfile& a, const BehaviorProfile& b);
// 1 iff both profiles call a premium-rate number.
double sim_cs(const BehaviorProfile& a, const BehaviorProfile& b);
// Jaccard index of the sensitive-information target names; 0 when both are
// empty.
double sim_sis(const BehaviorProfile& a, const BehaviorProfile& b);
double jaccard(const std::set<std::string>& a, const std::set<std::string>& b);

// Strips a scheme, drops the longest common prefix of dot-separated labels,
// and scores the residuals by normalized Levenshtein distance:
// 1 - lev(r_u, r_v) / max(|r_u|, |r_v|), or 1 when both residuals are empty.
// Throws Error(EmptyUrl).
double url_similarity(std::string_view u, std::string_view v);
std::size_t levenshtein(std::string_view a, std::string_view b);

// Mean of the destination-URL, cipher and encoding components. A component
// scores 0 unless both profiles carry it.
double sim_cds(const BehaviorProfile& a, const BehaviorProfile& b);

// Weighted sum of the four factor similarities.
SimilarityBreakdown total_similarity(const BehaviorProfile& a, const BehaviorProfile& b,
                                     const SimilarityWeights& w);

}  // namespace droidprof
