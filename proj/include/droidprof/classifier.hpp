#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "droidprof/category.hpp"
#include "droidprof/profile.hpp"
#include "droidprof/similarity.hpp"

namespace droidprof {

enum class UpdateMethod { Intersection, Union };

std::string_view to_string(UpdateMethod m);
std::optional<UpdateMethod> parse_update_method(std::string_view s);

struct ClassifierConfig {
  double threshold = 0.85;
  SimilarityWeights weights;
  UpdateMethod update_method = UpdateMethod::Intersection;

  // Throws Error(InvalidWeights) unless threshold is in (0,1].
  void validate() const;
};

struct FamilyRepresentative {
  std::string label;
  BehaviorProfile representative;
  // Fixed at creation; survives Method 1 shrinking the profile.
  BehaviorCategory category;
  std::size_t member_count = 0;

  friend bool operator==(const FamilyRepresentative&, const FamilyRepresentative&) = default;
};

struct JournalEntry {
  std::string sample_id;
  std::string decision;  // BENIGN | ASSIGNED:<label>[+EMPTY] | NEW:<label>
  double score = 0;

  std::string to_line() const;
  friend bool operator==(const JournalEntry&, const JournalEntry&) = default;
};

class ProfileStore {
 public:
  // Keyed by label, so iteration is in lexicographic label order.
  const std::map<std::string, FamilyRepresentative>& representatives() const { return reps_; }
  const std::vector<JournalEntry>& journal() const { return journal_; }

  const FamilyRepresentative* find(const std::string& label) const;
  FamilyRepresentative* find(const std::string& label);

  // Creates `cluster-NNNN` with the next unused number.
  FamilyRepresentative& create(const BehaviorProfile& p);
  // Throws Error(CorruptStore) on a duplicate label.
  void insert(FamilyRepresentative rep);
  void append(JournalEntry e) { journal_.push_back(std::move(e)); }

  friend bool operator==(const ProfileStore&, const ProfileStore&) = default;

 private:
  std::map<std::string, FamilyRepresentative> reps_;
  std::vector<JournalEntry> journal_;
  std::size_t next_cluster_ = 1;
};

struct Candidate {
  std::string label;
  SimilarityBreakdown breakdown;
  // breakdown.total divided by the weight mass of the sample's category; the
  // value compared against the threshold.
  double score = 0;
};

struct Decision {
  enum class Kind { Benign, Assigned, NewCluster };
  Kind kind = Kind::Benign;
  std::string label;
  SimilarityBreakdown breakdown;  // against the chosen family (Assigned)
  double score = 0;               // best candidate score, 0 when none
  bool representative_emptied = false;
};

// Threshold score of a breakdown for a sample of the given category:
// total / weights.mass(category). Zero when the mass is zero.
double relative_score(const SimilarityBreakdown& b, FactorSet category, const SimilarityWeights& w);

// Every representative sharing the sample's category, scored, in label order.
// Empty for benign-categorized samples.
std::vector<Candidate> score_candidates(const BehaviorProfile& p, const ProfileStore& store,
                                        const ClassifierConfig& cfg);

// Highest-scoring candidate (smallest label on ties), regardless of threshold.
std::optional<Candidate> best_match(const BehaviorProfile& p, const ProfileStore& store,
                                    const ClassifierConfig& cfg);

// Classifies against `store` and applies the resulting update: an assigned
// family's representative is merged per cfg.update_method, a new cluster is
// seeded with `p`. Every call appends one journal entry.
Decision classify(const BehaviorProfile& p, ProfileStore& store, const ClassifierConfig& cfg);

// Method 1: keeps (operation, target) entries present in both, attributes
// from `rep`; operations left empty are dropped.
BehaviorProfile update_intersection(const BehaviorProfile& rep, const BehaviorProfile& p);
// Method 2: all entries of either, attributes from `rep` on conflict.
BehaviorProfile update_union(const BehaviorProfile& rep, const BehaviorProfile& p);

// Store file:
//   # droidprof store v1
//   [representatives]
//   <label>|<category>|<member_count>|<base64-profile>
//   [journal]
//   <sample_id>|<decision>|<score>
//   @end <representative count> <journal count>
std::string save_store(const ProfileStore& store);
// Throws Error(CorruptStore), including when the trailer is missing.
ProfileStore load_store(std::string_view bytes);

}  // namespace droidprof
