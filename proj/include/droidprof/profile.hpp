#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>

#include "droidprof/behavior.hpp"
#include "droidprof/log.hpp"
#include "droidprof/rules.hpp"

namespace droidprof {

using TargetMap = std::map<std::string, std::string>;  // target -> attribute

// Nested mapping object -> operation -> target -> attribute. The object is a
// function of the operation (see object_of), so operations are stored
// directly and the object level is derived. Operations never hold an empty
// target map.
class BehaviorProfile {
 public:
  BehaviorProfile() = default;
  explicit BehaviorProfile(std::string sample_id) : sample_id_(std::move(sample_id)) {}

  const std::string& sample_id() const { return sample_id_; }
  void set_sample_id(std::string id) { sample_id_ = std::move(id); }

  const std::map<Factor, TargetMap>& operations() const { return ops_; }
  bool empty() const { return ops_.empty(); }
  bool has(Factor f) const { return ops_.contains(f); }
  // Empty map when the operation is absent.
  const TargetMap& targets(Factor f) const;
  std::set<std::string> target_names(Factor f) const;
  std::optional<std::string> attribute(Factor f, std::string_view target) const;

  // Inserts unless the target already exists; returns whether it inserted.
  bool add(Factor f, std::string target, std::string attribute);
  void remove(Factor f, const std::string& target);

  // Number of (operation, target) entries.
  std::size_t entry_count() const;

  friend bool operator==(const BehaviorProfile&, const BehaviorProfile&) = default;

 private:
  std::string sample_id_;
  std::map<Factor, TargetMap> ops_;
};

// Aggregates every finding of `rules` over `log`. When several findings share
// a (factor, target), the smallest attribute wins, which keeps the result
// independent of record and rule order.
BehaviorProfile build_profile(const IntegratedSystemLog& log, const RuleSet& rules);

// Canonical text form: an optional `@id <sample_id>` line followed by
// `Object/Operation/target=attribute` lines in sorted order, newline-joined.
std::string canonical_text(const BehaviorProfile& p);
// Throws Error(CorruptProfile).
BehaviorProfile parse_canonical_text(std::string_view text);

// Base-64 of the canonical text.
std::string encode_profile(const BehaviorProfile& p);
// Throws Error(CorruptProfile).
BehaviorProfile decode_profile(std::string_view bytes);

// Indented nested view for humans.
std::string pretty_text(const BehaviorProfile& p);

}  // namespace droidprof
