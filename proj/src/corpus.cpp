#include "droidprof/corpus.hpp"

#include <filesystem>
#include <set>

#include <fmt/format.h>

#include "droidprof/codec.hpp"
#include "droidprof/error.hpp"
#include "text.hpp"

namespace droidprof {

LabeledCorpus::LabeledCorpus(std::vector<LabeledSample> samples) : samples_(std::move(samples)) {
  std::set<std::string> ids;
  for (const auto& s : samples_) {
    if (s.truth.empty()) throw Error(ErrorKind::InvalidSpec, "sample with empty truth label");
    if (!ids.insert(s.log.sample_id()).second) {
      throw Error(ErrorKind::InvalidSpec, fmt::format("duplicate sample id '{}'", s.log.sample_id()));
    }
  }
}

std::vector<std::string> LabeledCorpus::truth_labels() const {
  std::vector<std::string> out;
  out.reserve(samples_.size());
  for (const auto& s : samples_) out.push_back(s.truth);
  return out;
}

std::vector<std::string> LabeledCorpus::label_set() const {
  std::set<std::string> labels;
  for (const auto& s : samples_) labels.insert(s.truth);
  return {labels.begin(), labels.end()};
}

LabeledCorpus load_corpus_dir(const std::string& dir) {
  const std::filesystem::path root(dir);
  const auto manifest = read_file((root / "labels.txt").string());
  std::vector<LabeledSample> samples;
  text::for_each_line(manifest, [&](std::size_t line_no, std::string_view line) {
    if (text::trim(line).empty() || line.front() == '#') return;
    const auto bar = line.rfind('|');
    if (bar == std::string_view::npos || bar == 0) {
      throw LineError(ErrorKind::MalformedLine, line_no, "expected <sample_id>|<truth_label>");
    }
    const std::string id(line.substr(0, bar));
    auto log = parse_log_file((root / (id + ".log")).string());
    if (log.sample_id() != id) {
      throw LineError(ErrorKind::MalformedLine, line_no,
                      fmt::format("log file for '{}' has sample id '{}'", id, log.sample_id()));
    }
    samples.push_back({std::move(log), std::string(line.substr(bar + 1))});
  });
  return LabeledCorpus(std::move(samples));
}

}  // namespace droidprof
