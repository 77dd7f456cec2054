#include "droidprof/profile.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

#include <fmt/format.h>

#include "droidprof/codec.hpp"
#include "droidprof/error.hpp"
#include "text.hpp"

namespace droidprof {

namespace {

const TargetMap kNoTargets;

}  // namespace

const TargetMap& BehaviorProfile::targets(Factor f) const {
  auto it = ops_.find(f);
  return it == ops_.end() ? kNoTargets : it->second;
}

std::set<std::string> BehaviorProfile::target_names(Factor f) const {
  std::set<std::string> names;
  for (const auto& [t, _] : targets(f)) names.insert(t);
  return names;
}

std::optional<std::string> BehaviorProfile::attribute(Factor f, std::string_view target) const {
  const auto& ts = targets(f);
  auto it = ts.find(std::string(target));
  if (it == ts.end()) return std::nullopt;
  return it->second;
}

bool BehaviorProfile::add(Factor f, std::string target, std::string attribute) {
  if (target.empty() || target.find_first_of("/=\n") != std::string::npos) {
    throw std::invalid_argument(fmt::format("invalid profile target '{}'", target));
  }
  if (attribute.find('\n') != std::string::npos) {
    throw std::invalid_argument("profile attribute contains a newline");
  }
  return ops_[f].emplace(std::move(target), std::move(attribute)).second;
}

void BehaviorProfile::remove(Factor f, const std::string& target) {
  auto it = ops_.find(f);
  if (it == ops_.end()) return;
  it->second.erase(target);
  if (it->second.empty()) ops_.erase(it);
}

std::size_t BehaviorProfile::entry_count() const {
  std::size_t n = 0;
  for (const auto& [_, ts] : ops_) n += ts.size();
  return n;
}

BehaviorProfile build_profile(const IntegratedSystemLog& log, const RuleSet& rules) {
  BehaviorProfile p(log.sample_id());
  // find_all returns findings sorted, so the first insert per target carries
  // the smallest attribute.
  for (auto& f : find_all(rules, log)) p.add(f.factor, std::move(f.target), std::move(f.attribute));
  return p;
}

std::string canonical_text(const BehaviorProfile& p) {
  std::vector<std::string> lines;
  for (const auto& [factor, ts] : p.operations()) {
    for (const auto& [target, attr] : ts) {
      lines.push_back(fmt::format("{}/{}/{}={}", to_string(object_of(factor)),
                                  operation_name(factor), target, attr));
    }
  }
  std::sort(lines.begin(), lines.end());
  std::string out;
  if (!p.sample_id().empty()) out = fmt::format("@id {}", p.sample_id());
  for (const auto& l : lines) {
    if (!out.empty()) out += '\n';
    out += l;
  }
  return out;
}

BehaviorProfile parse_canonical_text(std::string_view text) {
  BehaviorProfile p;
  text::for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    auto corrupt = [&](std::string_view why) {
      return Error(ErrorKind::CorruptProfile, fmt::format("line {}: {}", line_no, why));
    };
    if (line_no == 1 && line.starts_with("@id ")) {
      p.set_sample_id(std::string(line.substr(4)));
      return;
    }
    const auto s1 = line.find('/');
    const auto s2 = s1 == line.npos ? line.npos : line.find('/', s1 + 1);
    const auto eq = s2 == line.npos ? line.npos : line.find('=', s2 + 1);
    if (eq == line.npos) throw corrupt("expected object/operation/target=attribute");
    const auto object = parse_object(line.substr(0, s1));
    const auto factor = parse_factor(line.substr(s1 + 1, s2 - s1 - 1));
    if (!object || !factor || short_name(*factor) == line.substr(s1 + 1, s2 - s1 - 1)) {
      throw corrupt("unknown object or operation");
    }
    if (object_of(*factor) != *object) throw corrupt("operation filed under the wrong object");
    auto target = std::string(line.substr(s2 + 1, eq - s2 - 1));
    if (target.empty() || target.find('/') != std::string::npos) throw corrupt("bad target");
    if (!p.add(*factor, std::move(target), std::string(line.substr(eq + 1)))) {
      throw corrupt("duplicate target");
    }
  });
  return p;
}

std::string encode_profile(const BehaviorProfile& p) { return base64_encode(canonical_text(p)); }

BehaviorProfile decode_profile(std::string_view bytes) {
  auto decoded = base64_decode(text::trim(bytes));
  if (!decoded) throw Error(ErrorKind::CorruptProfile, "invalid base-64");
  return parse_canonical_text(*decoded);
}

std::string pretty_text(const BehaviorProfile& p) {
  std::string out;
  std::map<ObjectType, std::vector<Factor>> by_object;
  for (const auto& [factor, _] : p.operations()) by_object[object_of(factor)].push_back(factor);
  for (const auto& [object, factors] : by_object) {
    out += fmt::format("{}:\n", to_string(object));
    for (auto f : factors) {
      out += fmt::format("  {}:\n", operation_name(f));
      for (const auto& [t, a] : p.targets(f)) out += fmt::format("    {}: {}\n", t, a);
    }
  }
  if (out.empty()) out = "(no malicious behavior)\n";
  return out;
}

}  // namespace droidprof
