#pragma once

// Straightforward reference implementations used to cross-check the library.

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "droidprof/roc.hpp"

namespace oracle {

inline double jaccard(const std::set<std::string>& a, const std::set<std::string>& b) {
  std::vector<std::string> inter, uni;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(inter));
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(uni));
  return uni.empty() ? 0.0 : double(inter.size()) / double(uni.size());
}

// Full-matrix Wagner-Fischer.
inline std::size_t edit_distance(const std::string& a, const std::string& b) {
  std::vector<std::vector<std::size_t>> d(a.size() + 1, std::vector<std::size_t>(b.size() + 1));
  for (std::size_t i = 0; i <= a.size(); ++i) d[i][0] = i;
  for (std::size_t j = 0; j <= b.size(); ++j) d[0][j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1, d[i - 1][j - 1] + (a[i - 1] != b[j - 1])});
    }
  }
  return d[a.size()][b.size()];
}

inline std::vector<std::string> labels_of(const std::string& host) {
  std::vector<std::string> out(1);
  for (char c : host) {
    if (c == '.') {
      out.emplace_back();
    } else {
      out.back() += c;
    }
  }
  return out;
}

// Hosts only: no scheme, no trailing slash.
inline double url_similarity(const std::string& u, const std::string& v) {
  const auto a = labels_of(u), b = labels_of(v);
  std::size_t k = 0;
  while (k < a.size() && k < b.size() && a[k] == b[k]) ++k;
  auto join = [k](const std::vector<std::string>& l) {
    std::string s;
    for (std::size_t i = k; i < l.size(); ++i) s += (i > k ? "." : "") + l[i];
    return s;
  };
  const auto ra = join(a), rb = join(b);
  const auto m = std::max(ra.size(), rb.size());
  return m == 0 ? 1.0 : 1.0 - double(edit_distance(ra, rb)) / double(m);
}

// P(pos > neg) + P(pos == neg) / 2 over all pairs.
inline double mann_whitney_auc(const std::vector<droidprof::ScoredLabel>& s) {
  double wins = 0, pairs = 0;
  for (const auto& p : s) {
    if (!p.positive) continue;
    for (const auto& n : s) {
      if (n.positive) continue;
      pairs += 1;
      if (p.score > n.score) wins += 1;
      if (p.score == n.score) wins += 0.5;
    }
  }
  return wins / pairs;
}

}  // namespace oracle
