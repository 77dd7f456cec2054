#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "droidprof/category.hpp"
#include "droidprof/corpus.hpp"

namespace droidprof {

// Network behavior of a template: each sample contacts one of `hosts`.
// Empty cipher/encoding/port are simply not emitted.
struct CdsProfile {
  std::vector<std::string> hosts;
  std::string port;
  std::string cipher;    // DES, AES or Blowfish
  std::string encoding;  // gzip
};

struct BehaviorVariant {
  std::string name;
  FactorSet factors;
  std::set<std::string> sis_targets;
  std::optional<CdsProfile> cds;
  double probability = 1.0;
};

// Inclusive count range of filler records for one syscall name.
struct NoiseRange {
  std::string syscall;
  int lo = 0;
  int hi = 0;
};

struct NoiseModel {
  std::vector<NoiseRange> ranges;
  // Added on top of the base ranges for the same syscall name.
  std::vector<NoiseRange> extra;
};

NoiseModel default_noise();

struct FamilyTemplate {
  std::string name;
  std::vector<BehaviorVariant> variants;
  NoiseModel noise = default_noise();
};

struct CorpusSpec {
  std::vector<std::pair<FamilyTemplate, std::size_t>> templates;
  FamilyTemplate benign;
  // Variants of the benign template may only use CDS.
  std::size_t benign_count = 0;
  std::uint64_t seed = 7;

  // Throws Error(InvalidSpec).
  void validate() const;
};

// Target names the generator knows how to produce.
const std::set<std::string>& synthesizable_targets();

struct GeneratedSample {
  LabeledSample sample;
  FactorSet factors;  // ground truth; CDS-only benign samples report {CDS}
  std::set<std::string> sis_targets;
  std::string variant;
};

// Deterministic in spec.seed regardless of `jobs`. Malware samples come first
// in template order, then benign samples. Throws Error(InvalidSpec).
std::vector<GeneratedSample> generate_samples(const CorpusSpec& spec, unsigned jobs = 1);
LabeledCorpus generate_corpus(const CorpusSpec& spec, unsigned jobs = 1);

// AdWo 50, AirPush 8, FakeBattScar 6, Boxer 5, GinMaster 12, benign 1100.
// With `boxer_connection_error` Boxer samples lose their SMS behavior.
CorpusSpec default_paper_spec(bool boxer_connection_error = false);

// Every filler record the generator can emit for `noise`, for checking that
// no rule fires on filler.
std::vector<SyscallRecord> filler_vocabulary(const NoiseModel& noise);

// Writes `<sample_id>.log` files and `labels.txt` into `dir`, creating it.
void write_corpus_dir(const LabeledCorpus& corpus, const std::string& dir);

}  // namespace droidprof
