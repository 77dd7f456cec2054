#include "droidprof/category.hpp"

#include <bit>

#include "text.hpp"

namespace droidprof {

int FactorSet::size() const { return std::popcount(bits_); }

BehaviorCategory BehaviorCategory::of(FactorSet factors) {
  FactorSet malicious = factors;
  // Converting data alone does not make an application malicious.
  malicious = FactorSet(std::uint8_t(malicious.bits() & ~(1u << static_cast<unsigned>(Factor::ConvertingData))));
  return BehaviorCategory{factors, malicious.empty()};
}

BehaviorCategory categorize(const BehaviorProfile& p) {
  FactorSet s;
  for (const auto& [factor, _] : p.operations()) s.insert(factor);
  return BehaviorCategory::of(s);
}

std::vector<BehaviorCategory> enumerate_categories() {
  std::vector<BehaviorCategory> out;
  for (unsigned bits = 1; bits < 16; ++bits) out.push_back(BehaviorCategory::of(FactorSet(std::uint8_t(bits))));
  out.push_back(BehaviorCategory::of(FactorSet{}));
  return out;
}

std::string render_factors(FactorSet s) {
  if (s.empty()) return "BENIGN";
  std::string out;
  for (auto f : kAllFactors) {
    if (!s.contains(f)) continue;
    if (!out.empty()) out += '+';
    out += short_name(f);
  }
  return out;
}

std::string render_category(const BehaviorCategory& c) {
  return c.is_benign ? "BENIGN" : render_factors(c.factors);
}

std::optional<FactorSet> parse_factors(std::string_view s) {
  if (s == "BENIGN") return FactorSet{};
  FactorSet out;
  for (auto part : text::split(s, '+')) {
    auto f = parse_factor(part);
    if (!f || short_name(*f) != part || out.contains(*f)) return std::nullopt;
    out.insert(*f);
  }
  return out;
}

}  // namespace droidprof
