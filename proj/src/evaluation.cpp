#include "droidprof/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include <fmt/format.h>

#include "droidprof/crowdroid.hpp"
#include "droidprof/error.hpp"
#include "droidprof/parallel.hpp"
#include "droidprof/roc.hpp"
#include "random.hpp"

namespace droidprof {

namespace {

constexpr std::uint64_t kStreamOrder = 0x5354524d;  // per-purpose substream tags
constexpr std::uint64_t kFoldShuffle = 0x464f4c44;
constexpr std::uint64_t kKMeans = 0x4b4d4e53;

struct Prediction {
  std::string label;
  std::vector<double> scores;  // one per report label
};

std::size_t index_of(const std::vector<std::string>& labels, std::string_view l) {
  auto it = std::lower_bound(labels.begin(), labels.end(), l);
  return (it != labels.end() && *it == l) ? static_cast<std::size_t>(it - labels.begin()) : labels.size();
}

std::vector<std::size_t> stream_order(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  auto rng = rnd::substream(seed, kStreamOrder, 0);
  rnd::shuffle(rng, order);
  return order;
}

// cluster id -> truth label -> member count
using Membership = std::map<std::string, std::map<std::string, std::size_t>>;

std::map<std::string, std::string> align(const Membership& members, const std::vector<std::string>& labels,
                                         Alignment method) {
  std::map<std::string, std::string> out;
  if (method == Alignment::Majority) {
    for (const auto& [cluster, counts] : members) {
      const std::string* best = nullptr;
      std::size_t best_n = 0;
      for (const auto& [label, n] : counts) {
        if (n > best_n) {
          best = &label;
          best_n = n;
        }
      }
      out[cluster] = best ? *best : std::string(kUnknownLabel);
    }
    return out;
  }
  std::vector<std::string> clusters;
  std::vector<std::vector<double>> w;
  for (const auto& [cluster, counts] : members) {
    clusters.push_back(cluster);
    std::vector<double> row(labels.size(), 0.0);
    for (const auto& [label, n] : counts) {
      if (auto j = index_of(labels, label); j < labels.size()) row[j] = static_cast<double>(n);
    }
    w.push_back(std::move(row));
  }
  const auto match = hungarian_max(w);
  for (std::size_t i = 0; i < clusters.size(); ++i) {
    out[clusters[i]] = (match[i] && w[i][*match[i]] > 0) ? labels[*match[i]] : std::string(kUnknownLabel);
  }
  return out;
}

void fill_cluster_counts(EvaluationReport& r, const LabeledCorpus& corpus,
                         const std::vector<std::string>& cluster_of) {
  std::map<std::string, std::set<std::string>> per_label;
  std::set<std::string> malware, benign;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (cluster_of[i].empty()) continue;
    const auto& truth = corpus[i].truth;
    per_label[truth].insert(cluster_of[i]);
    (truth == kBenignLabel ? benign : malware).insert(cluster_of[i]);
  }
  for (auto& [label, m] : r.per_label) m.clusters = per_label[label].size();
  r.malware_clusters = malware.size();
  r.benign_clusters = benign.size();
}

EvaluationReport aggregate(const LabeledCorpus& corpus, const std::vector<std::string>& labels,
                           const std::vector<Prediction>& preds) {
  EvaluationReport r;
  r.labels = labels;
  r.confusion.assign(labels.size(), std::vector<std::size_t>(labels.size() + 1, 0));
  std::size_t hits = 0;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto t = index_of(labels, corpus[i].truth);
    const auto p = index_of(labels, preds[i].label);
    ++r.confusion[t][p];
    auto& m = r.per_label[labels[t]];
    ++m.samples;
    if (t == p) {
      ++m.hits;
      ++hits;
    }
  }
  r.overall_accuracy = corpus.size() ? static_cast<double>(hits) / static_cast<double>(corpus.size()) : 0.0;

  double auc_sum = 0;
  std::size_t auc_n = 0;
  for (std::size_t l = 0; l < labels.size(); ++l) {
    auto& m = r.per_label[labels[l]];
    m.accuracy = m.samples ? static_cast<double>(m.hits) / static_cast<double>(m.samples) : 0.0;
    if (m.samples == 0 || m.samples == corpus.size()) continue;
    std::vector<ScoredLabel> scores;
    scores.reserve(corpus.size());
    for (std::size_t i = 0; i < corpus.size(); ++i) scores.push_back({preds[i].scores[l], corpus[i].truth == labels[l]});
    m.auc = roc_auc(scores);
    auc_sum += *m.auc;
    ++auc_n;
  }
  if (auc_n) r.macro_auc = auc_sum / static_cast<double>(auc_n);
  return r;
}

std::string fmt_metric(std::optional<double> v) { return v ? fmt::format("{:.4f}", *v) : "-"; }

}  // namespace

std::string_view to_string(Alignment a) { return a == Alignment::Majority ? "majority" : "hungarian"; }

std::optional<Alignment> parse_alignment(std::string_view s) {
  if (s == "majority") return Alignment::Majority;
  if (s == "hungarian") return Alignment::Hungarian;
  return std::nullopt;
}

std::vector<Fold> kfold_split(const LabeledCorpus& corpus, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw Error(ErrorKind::InvalidSpec, fmt::format("need at least 2 folds, got {}", k));
  std::map<std::string, std::vector<std::size_t>> by_label;
  for (std::size_t i = 0; i < corpus.size(); ++i) by_label[corpus[i].truth].push_back(i);
  for (const auto& [label, idx] : by_label) {
    if (idx.size() < k) {
      throw Error(ErrorKind::InsufficientSamples,
                  fmt::format("label '{}' has {} samples for {} folds", label, idx.size(), k));
    }
  }

  std::vector<std::size_t> fold_of(corpus.size());
  std::size_t next = 0;
  std::uint64_t label_no = 0;
  for (auto& [label, idx] : by_label) {
    auto rng = rnd::substream(seed, kFoldShuffle, label_no++);
    rnd::shuffle(rng, idx);
    for (auto i : idx) fold_of[i] = next++ % k;
  }

  std::vector<Fold> folds(k);
  for (auto i : stream_order(corpus.size(), seed)) {
    for (std::size_t f = 0; f < k; ++f) (fold_of[i] == f ? folds[f].test : folds[f].train).push_back(i);
  }
  return folds;
}

std::vector<BehaviorProfile> profile_corpus(const LabeledCorpus& corpus, const RuleSet& rules, unsigned jobs) {
  std::vector<BehaviorProfile> out(corpus.size());
  parallel_for(corpus.size(), jobs, [&](std::size_t i) { out[i] = build_profile(corpus[i].log, rules); });
  return out;
}

EvaluationReport run_evaluation(const LabeledCorpus& corpus, const std::vector<BehaviorProfile>& profiles,
                                const ClassifierConfig& cfg, const EvaluationOptions& opts) {
  cfg.validate();
  const auto labels = corpus.label_set();
  const auto benign_idx = index_of(labels, kBenignLabel);
  const auto folds = kfold_split(corpus, opts.folds, opts.seed);

  std::vector<Prediction> preds(corpus.size());
  parallel_for(folds.size(), opts.jobs, [&](std::size_t f) {
    ProfileStore store;
    Membership members;
    for (auto i : folds[f].train) {
      const auto d = classify(profiles[i], store, cfg);
      if (d.kind != Decision::Kind::Benign) ++members[d.label][corpus[i].truth];
    }
    const auto aligned = align(members, labels, opts.alignment);

    for (auto i : folds[f].test) {
      Prediction p{std::string(kUnknownLabel), std::vector<double>(labels.size(), 0.0)};
      const auto cands = score_candidates(profiles[i], store, cfg);
      const Candidate* best = nullptr;
      double best_malware = 0;
      for (const auto& c : cands) {
        if (!best || c.score > best->score) best = &c;
        const auto l = index_of(labels, aligned.at(c.label));
        if (l < labels.size()) p.scores[l] = std::max(p.scores[l], c.score);
        if (l != benign_idx) best_malware = std::max(best_malware, c.score);
      }
      if (benign_idx < labels.size()) p.scores[benign_idx] = 1.0 - best_malware;
      if (categorize(profiles[i]).is_benign) {
        p.label = std::string(kBenignLabel);
      } else if (best && best->score >= cfg.threshold) {
        p.label = aligned.at(best->label);
      }
      preds[i] = std::move(p);
    }
  });

  auto report = aggregate(corpus, labels, preds);

  ProfileStore store;
  std::vector<std::string> cluster_of(corpus.size());
  for (auto i : stream_order(corpus.size(), opts.seed)) {
    const auto d = classify(profiles[i], store, cfg);
    if (d.kind != Decision::Kind::Benign) cluster_of[i] = d.label;
  }
  fill_cluster_counts(report, corpus, cluster_of);
  return report;
}

EvaluationReport run_evaluation(const LabeledCorpus& corpus, const RuleSet& rules, const ClassifierConfig& cfg,
                                const EvaluationOptions& opts) {
  return run_evaluation(corpus, profile_corpus(corpus, rules, opts.jobs), cfg, opts);
}

namespace {

KMeansResult best_kmeans(const std::vector<DenseVector>& rows, std::size_t k, const BaselineOptions& b,
                         std::uint64_t seed, std::uint64_t stream) {
  std::optional<KMeansResult> best;
  const std::size_t restarts = std::max<std::size_t>(1, b.restarts);
  for (std::size_t r = 0; r < restarts; ++r) {
    auto rng = rnd::substream(seed, kKMeans ^ stream, r);
    auto res = kmeans(rows, k, rng(), b.max_iter);
    if (!best || res.inertia < best->inertia) best = std::move(res);
  }
  return std::move(*best);
}

}  // namespace

EvaluationReport evaluate_baseline(const LabeledCorpus& corpus, const BaselineOptions& baseline,
                                   const EvaluationOptions& opts) {
  const auto labels = corpus.label_set();
  const std::size_t k = baseline.k ? baseline.k : labels.size();
  const auto folds = kfold_split(corpus, opts.folds, opts.seed);

  std::vector<SyscallFrequencyVector> vectors(corpus.size());
  parallel_for(corpus.size(), opts.jobs, [&](std::size_t i) { vectors[i] = build_frequency_vector(corpus[i].log); });

  std::vector<Prediction> preds(corpus.size());
  parallel_for(folds.size(), opts.jobs, [&](std::size_t f) {
    std::vector<SyscallFrequencyVector> train;
    for (auto i : folds[f].train) train.push_back(vectors[i]);
    const auto matrix = embed(train, baseline.l1_normalize);
    const auto km = best_kmeans(matrix.rows, k, baseline, opts.seed, f);

    Membership members;
    for (std::size_t c = 0; c < k; ++c) members[fmt::format("{:04}", c)];
    for (std::size_t r = 0; r < train.size(); ++r) {
      ++members[fmt::format("{:04}", km.assignments[r])][corpus[folds[f].train[r]].truth];
    }
    const auto aligned = align(members, labels, opts.alignment);
    std::vector<std::size_t> centroid_label(k);
    for (std::size_t c = 0; c < k; ++c) centroid_label[c] = index_of(labels, aligned.at(fmt::format("{:04}", c)));

    for (auto i : folds[f].test) {
      const auto x = project(vectors[i], matrix.dimensions, baseline.l1_normalize);
      Prediction p{std::string(kUnknownLabel),
                   std::vector<double>(labels.size(), std::numeric_limits<double>::lowest())};
      double nearest = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < k; ++c) {
        const double d = squared_distance(x, km.centroids[c]);
        const auto l = centroid_label[c];
        if (l < labels.size()) p.scores[l] = std::max(p.scores[l], -d);
        if (d < nearest) {
          nearest = d;
          p.label = l < labels.size() ? labels[l] : std::string(kUnknownLabel);
        }
      }
      preds[i] = std::move(p);
    }
  });

  auto report = aggregate(corpus, labels, preds);

  const auto full = embed(vectors, baseline.l1_normalize);
  const auto km = best_kmeans(full.rows, std::min(k, corpus.size()), baseline, opts.seed, folds.size());
  std::vector<std::string> cluster_of(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) cluster_of[i] = fmt::format("{:04}", km.assignments[i]);
  fill_cluster_counts(report, corpus, cluster_of);
  return report;
}

std::vector<SimilarityWeights> default_weight_schedule() {
  return {{0.25, 0.25, 0.25, 0.25}, {0.27, 0.27, 0.24, 0.22}, {0.29, 0.29, 0.23, 0.19},
          {0.31, 0.31, 0.22, 0.16}, {0.33, 0.33, 0.21, 0.13}, {0.35, 0.35, 0.20, 0.10}};
}

TuneResult tune_weights(const LabeledCorpus& corpus, const std::vector<BehaviorProfile>& profiles,
                        const std::vector<SimilarityWeights>& schedule, const ClassifierConfig& base,
                        const EvaluationOptions& opts) {
  TuneResult out;
  for (const auto& w : schedule) {
    ClassifierConfig cfg = base;
    cfg.weights = w;
    const auto r = run_evaluation(corpus, profiles, cfg, opts);
    out.rows.push_back({w, r.malware_clusters, r.benign_clusters, r.overall_accuracy});
  }
  out.stop_row = out.rows.empty() ? 0 : out.rows.size() - 1;
  auto sign = [](double d) { return (d > 1e-12) - (d < -1e-12); };
  for (std::size_t i = 2; i < out.rows.size(); ++i) {
    const int prev = sign(out.rows[i - 1].accuracy - out.rows[i - 2].accuracy);
    const int cur = sign(out.rows[i].accuracy - out.rows[i - 1].accuracy);
    if (cur != prev) {
      out.stop_row = i;
      break;
    }
  }
  return out;
}

std::vector<std::string> check_gates(const EvaluationReport& r, const GateThresholds& g) {
  std::vector<std::string> failed;
  constexpr double eps = 1e-12;
  if (r.overall_accuracy + eps < g.overall) {
    failed.push_back(fmt::format("overall accuracy {:.4f} < {:.4f}", r.overall_accuracy, g.overall));
  }
  for (const auto& [label, m] : r.per_label) {
    const double bar = label == kBenignLabel ? g.benign : g.family;
    if (m.accuracy + eps < bar) failed.push_back(fmt::format("{} accuracy {:.4f} < {:.4f}", label, m.accuracy, bar));
  }
  return failed;
}

std::string render_machine(const EvaluationReport& r) {
  std::string out;
  for (const auto& l : r.labels) {
    const auto& m = r.per_label.at(l);
    out += fmt::format("{}|{:.4f}|{}\n", l, m.accuracy, fmt_metric(m.auc));
  }
  out += fmt::format("OVERALL|{:.4f}|{}\n", r.overall_accuracy, fmt_metric(r.macro_auc));
  for (const auto& l : r.labels) out += fmt::format("@clusters|{}|{}\n", l, r.per_label.at(l).clusters);
  out += fmt::format("@clusters|MALWARE|{}\n", r.malware_clusters);
  return out;
}

std::string render_human(const EvaluationReport& r) {
  std::size_t width = 8;
  for (const auto& l : r.labels) width = std::max(width, l.size() + 2);
  std::string out = fmt::format("{:<{}}{:>8}{:>8}{:>10}{:>8}{:>10}\n", "label", width, "samples", "hits",
                                "accuracy", "auc", "clusters");
  for (const auto& l : r.labels) {
    const auto& m = r.per_label.at(l);
    out += fmt::format("{:<{}}{:>8}{:>8}{:>10.4f}{:>8}{:>10}\n", l, width, m.samples, m.hits, m.accuracy,
                       fmt_metric(m.auc), m.clusters);
  }
  out += fmt::format("\noverall accuracy {:.4f}, macro AUC {}\n", r.overall_accuracy, fmt_metric(r.macro_auc));
  out += fmt::format("malware clusters {}, benign clusters {}\n\n", r.malware_clusters, r.benign_clusters);
  out += "confusion (rows: truth, columns: predicted)\n";
  out += fmt::format("{:<{}}", "", width);
  for (const auto& l : r.labels) out += fmt::format("{:>{}}", l, l.size() + 2);
  out += fmt::format("{:>9}\n", kUnknownLabel);
  for (std::size_t i = 0; i < r.labels.size(); ++i) {
    out += fmt::format("{:<{}}", r.labels[i], width);
    for (std::size_t j = 0; j < r.labels.size(); ++j) out += fmt::format("{:>{}}", r.confusion[i][j], r.labels[j].size() + 2);
    out += fmt::format("{:>9}\n", r.confusion[i].back());
  }
  return out;
}

std::string render_machine(const TuneResult& t) {
  std::string out;
  for (const auto& row : t.rows) {
    out += fmt::format("{:.2f},{:.2f},{:.2f},{:.2f}|{}|{}|{:.4f}\n", row.weights.ss(), row.weights.cs(),
                       row.weights.sis(), row.weights.cds(), row.malware_clusters, row.benign_clusters, row.accuracy);
  }
  if (!t.rows.empty()) out += fmt::format("@stop|{}\n", t.stop_row + 1);
  return out;
}

std::string render_human(const TuneResult& t) {
  std::string out = fmt::format("{:>4}{:>7}{:>7}{:>7}{:>7}{:>10}{:>9}{:>10}\n", "row", "SS", "CS", "SIS", "CDS",
                                "malware", "benign", "accuracy");
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const auto& row = t.rows[i];
    out += fmt::format("{:>4}{:>7.2f}{:>7.2f}{:>7.2f}{:>7.2f}{:>10}{:>9}{:>10.4f}{}\n", i + 1, row.weights.ss(),
                       row.weights.cs(), row.weights.sis(), row.weights.cds(), row.malware_clusters,
                       row.benign_clusters, row.accuracy, i == t.stop_row ? "  <- stop" : "");
  }
  return out;
}

std::vector<std::optional<std::size_t>> hungarian_max(const std::vector<std::vector<double>>& weights) {
  const std::size_t rows = weights.size();
  const std::size_t cols = rows ? weights[0].size() : 0;
  const std::size_t n = std::max(rows, cols);
  std::vector<std::optional<std::size_t>> out(rows);
  if (n == 0) return out;

  // Square min-cost assignment on negated weights, padded with zeros.
  auto cost = [&](std::size_t i, std::size_t j) {
    return (i < rows && j < cols) ? -weights[i][j] : 0.0;
  };
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0), v(n + 1, 0);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  for (std::size_t j = 1; j <= n; ++j) {
    if (p[j] >= 1 && p[j] <= rows && j <= cols) out[p[j] - 1] = j - 1;
  }
  return out;
}

}  // namespace droidprof
