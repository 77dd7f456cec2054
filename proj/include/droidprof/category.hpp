#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "droidprof/behavior.hpp"
#include "droidprof/profile.hpp"

namespace droidprof {

// Small bit set over the four factors.
class FactorSet {
 public:
  constexpr FactorSet() = default;
  constexpr explicit FactorSet(std::uint8_t bits) : bits_(bits & 0xF) {}
  constexpr FactorSet(std::initializer_list<Factor> fs) {
    for (auto f : fs) insert(f);
  }

  constexpr void insert(Factor f) { bits_ |= bit(f); }
  constexpr bool contains(Factor f) const { return (bits_ & bit(f)) != 0; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr std::uint8_t bits() const { return bits_; }
  int size() const;

  friend constexpr bool operator==(FactorSet, FactorSet) = default;
  friend constexpr auto operator<=>(FactorSet, FactorSet) = default;

 private:
  static constexpr std::uint8_t bit(Factor f) { return std::uint8_t(1u << static_cast<unsigned>(f)); }
  std::uint8_t bits_ = 0;
};

struct BehaviorCategory {
  FactorSet factors;
  // True iff no factor other than ConvertingData is present.
  bool is_benign = true;

  static BehaviorCategory of(FactorSet factors);

  friend bool operator==(const BehaviorCategory&, const BehaviorCategory&) = default;
};

BehaviorCategory categorize(const BehaviorProfile& p);

// The 15 non-empty factor subsets in increasing bit order, followed by the
// empty Benign category. The {CDS} subset is present but flagged benign.
std::vector<BehaviorCategory> enumerate_categories();

// "SS+SIS", "CDS", ... in canonical factor order; "BENIGN" for benign
// categories.
std::string render_category(const BehaviorCategory& c);
// Renders the factor set itself, never "BENIGN" unless empty.
std::string render_factors(FactorSet s);
// Inverse of render_factors; "BENIGN" parses as the empty set.
std::optional<FactorSet> parse_factors(std::string_view s);

}  // namespace droidprof
