#include "droidprof/crowdroid.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <set>

#include <fmt/format.h>

#include "droidprof/error.hpp"
#include "random.hpp"

namespace droidprof {

SyscallFrequencyVector build_frequency_vector(const IntegratedSystemLog& log) {
  SyscallFrequencyVector v{log.sample_id(), {}};
  for (const auto& r : log.records()) ++v.counts[r.name];
  return v;
}

DenseVector project(const SyscallFrequencyVector& v, const std::vector<std::string>& dimensions,
                    bool l1_normalize) {
  DenseVector row(dimensions.size(), 0.0);
  double total = 0.0;
  for (std::size_t d = 0; d < dimensions.size(); ++d) {
    auto it = v.counts.find(dimensions[d]);
    if (it != v.counts.end()) row[d] = static_cast<double>(it->second);
    total += row[d];
  }
  if (l1_normalize && total > 0.0) {
    for (auto& x : row) x /= total;
  }
  return row;
}

FrequencyMatrix embed(const std::vector<SyscallFrequencyVector>& vectors, bool l1_normalize) {
  std::set<std::string> names;
  for (const auto& v : vectors) {
    for (const auto& [name, _] : v.counts) names.insert(name);
  }
  FrequencyMatrix m;
  m.dimensions.assign(names.begin(), names.end());
  for (const auto& v : vectors) {
    m.sample_ids.push_back(v.sample_id);
    m.rows.push_back(project(v, m.dimensions, l1_normalize));
  }
  return m;
}

double squared_distance(const DenseVector& a, const DenseVector& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

std::size_t nearest_centroid(const DenseVector& x, const std::vector<DenseVector>& centroids) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < centroids.size(); ++c) {
    const double d = squared_distance(x, centroids[c]);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

KMeansResult kmeans(const std::vector<DenseVector>& rows, std::size_t k, std::uint64_t seed,
                    std::size_t max_iter) {
  const std::size_t n = rows.size();
  if (k == 0 || k > n) throw Error(ErrorKind::InvalidK, fmt::format("k={} with {} points", k, n));

  rnd::Rng rng(seed);
  KMeansResult res;

  // k-means++ seeding.
  std::vector<bool> chosen(n, false);
  std::vector<double> dist(n, std::numeric_limits<double>::infinity());
  std::size_t first = static_cast<std::size_t>(rnd::below(rng, n));
  res.centroids.push_back(rows[first]);
  chosen[first] = true;
  while (res.centroids.size() < k) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      dist[i] = std::min(dist[i], squared_distance(rows[i], res.centroids.back()));
      if (!chosen[i]) total += dist[i];
    }
    std::size_t pick = n;
    if (total > 0.0) {
      double r = total * static_cast<double>(rng() >> 11) * 0x1.0p-53;
      for (std::size_t i = 0; i < n; ++i) {
        if (chosen[i] || dist[i] <= 0.0) continue;
        pick = i;
        r -= dist[i];
        if (r <= 0.0) break;
      }
    }
    if (pick == n) {
      // All remaining points coincide with a centroid.
      pick = static_cast<std::size_t>(std::find(chosen.begin(), chosen.end(), false) - chosen.begin());
    }
    chosen[pick] = true;
    res.centroids.push_back(rows[pick]);
  }

  res.assignments.assign(n, k);  // k marks "unassigned"
  const std::size_t dims = rows.front().size();
  for (std::size_t iter = 0; iter < max_iter; ++iter) {
    bool changed = false;
    double inertia = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto c = nearest_centroid(rows[i], res.centroids);
      inertia += squared_distance(rows[i], res.centroids[c]);
      if (c != res.assignments[i]) {
        res.assignments[i] = c;
        changed = true;
      }
    }
    res.inertia_history.push_back(inertia);
    res.iterations = iter + 1;
    if (!changed) break;

    std::vector<DenseVector> sums(k, DenseVector(dims, 0.0));
    std::vector<std::size_t> sizes(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      auto& s = sums[res.assignments[i]];
      for (std::size_t d = 0; d < dims; ++d) s[d] += rows[i][d];
      ++sizes[res.assignments[i]];
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (sizes[c] == 0) continue;
      for (std::size_t d = 0; d < dims; ++d) res.centroids[c][d] = sums[c][d] / static_cast<double>(sizes[c]);
    }
  }

  res.inertia = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    res.inertia += squared_distance(rows[i], res.centroids[res.assignments[i]]);
  }
  return res;
}

}  // namespace droidprof
