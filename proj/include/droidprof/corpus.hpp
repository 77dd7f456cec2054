#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "droidprof/log.hpp"

namespace droidprof {

inline constexpr std::string_view kBenignLabel = "BENIGN";

struct LabeledSample {
  IntegratedSystemLog log;
  std::string truth;  // family name or BENIGN
};

class LabeledCorpus {
 public:
  LabeledCorpus() = default;
  // Throws Error(InvalidSpec) on a repeated sample id or an empty label.
  explicit LabeledCorpus(std::vector<LabeledSample> samples);

  const std::vector<LabeledSample>& samples() const { return samples_; }
  std::size_t size() const { return samples_.size(); }
  const LabeledSample& operator[](std::size_t i) const { return samples_[i]; }

  std::vector<std::string> truth_labels() const;
  // Sorted distinct labels.
  std::vector<std::string> label_set() const;

 private:
  std::vector<LabeledSample> samples_;
};

// Directory layout: one `<sample_id>.log` per sample plus `labels.txt` with
// `<sample_id>|<truth_label>` lines in corpus order.
LabeledCorpus load_corpus_dir(const std::string& dir);

}  // namespace droidprof
