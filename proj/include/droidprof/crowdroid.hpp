#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "droidprof/log.hpp"

namespace droidprof {

// Baseline in the style of Crowdroid: per-sample syscall frequency tables
// clustered with k-means.

struct SyscallFrequencyVector {
  std::string sample_id;
  std::map<std::string, std::uint64_t> counts;  // only names that occur
};

SyscallFrequencyVector build_frequency_vector(const IntegratedSystemLog& log);

using DenseVector = std::vector<double>;

// Embeds the vectors in the sorted union of their syscall names. With
// `l1_normalize`, each row is divided by its total count.
struct FrequencyMatrix {
  std::vector<std::string> dimensions;
  std::vector<std::string> sample_ids;
  std::vector<DenseVector> rows;
};
FrequencyMatrix embed(const std::vector<SyscallFrequencyVector>& vectors, bool l1_normalize = false);
// Projects one vector onto existing dimensions; unknown names are dropped.
DenseVector project(const SyscallFrequencyVector& v, const std::vector<std::string>& dimensions,
                    bool l1_normalize = false);

struct KMeansResult {
  std::vector<std::size_t> assignments;  // row index -> cluster
  std::vector<DenseVector> centroids;
  double inertia = 0;
  // Inertia after every assignment step, for diagnostics.
  std::vector<double> inertia_history;
  std::size_t iterations = 0;
};

// Lloyd iterations from k-means++ seeding until the assignment is a fixpoint
// or `max_iter` is reached. An emptied cluster keeps its previous centroid.
// Throws Error(InvalidK) unless 1 <= k <= rows.size().
KMeansResult kmeans(const std::vector<DenseVector>& rows, std::size_t k, std::uint64_t seed,
                    std::size_t max_iter = 100);

std::size_t nearest_centroid(const DenseVector& x, const std::vector<DenseVector>& centroids);
double squared_distance(const DenseVector& a, const DenseVector& b);

}  // namespace droidprof
