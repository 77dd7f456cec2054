#include "droidprof/rules.hpp"

#include <algorithm>
#include <charconv>
#include <set>
#include <stdexcept>

#include <fmt/format.h>

#include "droidprof/codec.hpp"
#include "droidprof/error.hpp"
#include "text.hpp"

namespace droidprof {

namespace {

std::optional<std::size_t> parse_index(std::string_view s) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

GlobPattern compile(std::size_t line_no, std::string_view source) {
  try {
    return GlobPattern(source);
  } catch (const std::invalid_argument& e) {
    throw LineError(ErrorKind::RuleSyntax, line_no,
                    fmt::format("bad pattern '{}': {}", source, e.what()));
  }
}

AttributeSource parse_attribute(std::size_t line_no, std::string_view s) {
  const auto colon = s.find(':');
  if (colon == std::string_view::npos) {
    throw LineError(ErrorKind::RuleSyntax, line_no, fmt::format("bad attribute source '{}'", s));
  }
  const auto tag = s.substr(0, colon);
  const auto rest = s.substr(colon + 1);
  AttributeSource src;
  if (tag == "literal") {
    src.kind = AttributeSource::Kind::Literal;
    src.value = std::string(rest);
    return src;
  }
  if (tag == "key") {
    if (rest.empty()) throw LineError(ErrorKind::RuleSyntax, line_no, "empty payload key");
    src.kind = AttributeSource::Kind::PayloadKey;
    src.value = std::string(rest);
    return src;
  }
  const auto index = parse_index(rest);
  if (!index) {
    throw LineError(ErrorKind::RuleSyntax, line_no, fmt::format("bad index in '{}'", s));
  }
  src.index = *index;
  if (tag == "arg") {
    src.kind = AttributeSource::Kind::CaptureArg;
  } else if (tag == "match") {
    src.kind = AttributeSource::Kind::MatchedArg;
  } else if (tag == "group") {
    src.kind = AttributeSource::Kind::Group;
  } else {
    throw LineError(ErrorKind::RuleSyntax, line_no, fmt::format("unknown attribute source '{}'", tag));
  }
  return src;
}

ParsingRule parse_rule(std::size_t line_no, std::string_view line) {
  std::vector<std::string_view> fields;
  if (!text::split_outside_braces(line, '|', fields)) {
    throw LineError(ErrorKind::RuleSyntax, line_no, "unbalanced braces");
  }
  if (fields.size() != 7) {
    throw LineError(ErrorKind::RuleSyntax, line_no,
                    fmt::format("expected 7 fields, found {}", fields.size()));
  }
  for (auto& f : fields) f = text::trim(f);

  ParsingRule rule;
  rule.id = std::string(fields[0]);
  if (rule.id.empty()) throw LineError(ErrorKind::RuleSyntax, line_no, "empty rule id");

  const auto factor = parse_factor(fields[1]);
  if (!factor) {
    throw LineError(ErrorKind::RuleSyntax, line_no, fmt::format("unknown factor '{}'", fields[1]));
  }
  rule.factor = *factor;

  if (fields[2] == "syscall") {
    rule.kind = RuleKind::SyscallPattern;
  } else if (fields[2] == "event") {
    rule.kind = RuleKind::EventPattern;
  } else {
    throw LineError(ErrorKind::RuleSyntax, line_no, fmt::format("unknown kind '{}'", fields[2]));
  }

  if (fields[3].empty()) throw LineError(ErrorKind::RuleSyntax, line_no, "empty name pattern");
  rule.name_pattern = compile(line_no, fields[3]);
  if (rule.kind == RuleKind::EventPattern) {
    bool any = false;
    for (auto c : {Channel::SMS, Channel::CALL, Channel::NET_OPEN, Channel::NET_SEND, Channel::DATA_LEAK, Channel::MAP}) {
      any = any || rule.name_pattern.matches(to_string(c));
    }
    if (!any) {
      throw LineError(ErrorKind::RuleSyntax, line_no,
                      fmt::format("name pattern '{}' matches no event channel", fields[3]));
    }
  }

  std::size_t groups = 0;
  if (!fields[4].empty() && fields[4] != "-") {
    std::vector<std::string_view> parts;
    text::split_outside_braces(fields[4], ';', parts);
    for (auto p : parts) {
      p = text::trim(p);
      if (p.empty()) throw LineError(ErrorKind::RuleSyntax, line_no, "empty argument pattern");
      rule.arg_patterns.push_back(compile(line_no, p));
      groups += rule.arg_patterns.back().group_count();
    }
  }

  rule.target = std::string(fields[5]);
  if (rule.target.empty() || rule.target.find_first_of("/=\n") != std::string::npos) {
    throw LineError(ErrorKind::RuleSyntax, line_no,
                    "target must be non-empty and free of '/', '=' and newlines");
  }

  rule.attribute = parse_attribute(line_no, fields[6]);
  using K = AttributeSource::Kind;
  const bool syscall = rule.kind == RuleKind::SyscallPattern;
  switch (rule.attribute.kind) {
    case K::Literal: break;
    case K::CaptureArg:
      if (!syscall) throw LineError(ErrorKind::RuleSyntax, line_no, "arg: needs a syscall rule");
      break;
    case K::PayloadKey:
      if (syscall) throw LineError(ErrorKind::RuleSyntax, line_no, "key: needs an event rule");
      break;
    case K::MatchedArg:
      if (rule.attribute.index >= rule.arg_patterns.size()) {
        throw LineError(ErrorKind::RuleSyntax, line_no, "match: index out of range");
      }
      break;
    case K::Group:
      if (rule.attribute.index >= groups) {
        throw LineError(ErrorKind::RuleSyntax, line_no, "group: index out of range");
      }
      break;
  }
  return rule;
}

// Shared matcher: `values` are the strings arg patterns are tested against,
// `matched_value` maps a hit back to the attribute text for match:<i>.
template <typename ValueOf>
std::optional<Finding> match_values(const ParsingRule& rule, std::string_view name,
                                    const std::vector<std::string>& values, ValueOf&& matched_value,
                                    auto&& lookup) {
  if (!rule.name_pattern.matches(name)) return std::nullopt;
  std::vector<std::string> groups;
  std::vector<std::size_t> hits;
  for (const auto& pattern : rule.arg_patterns) {
    bool found = false;
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (auto caps = pattern.match(values[i])) {
        groups.insert(groups.end(), caps->begin(), caps->end());
        hits.push_back(i);
        found = true;
        break;
      }
    }
    if (!found) return std::nullopt;
  }

  using K = AttributeSource::Kind;
  const auto& src = rule.attribute;
  std::optional<std::string> attribute;
  switch (src.kind) {
    case K::Literal: attribute = src.value; break;
    case K::MatchedArg: attribute = matched_value(hits.at(src.index)); break;
    case K::Group:
      if (src.index < groups.size()) attribute = groups[src.index];
      break;
    case K::CaptureArg:
    case K::PayloadKey: attribute = lookup(src); break;
  }
  if (!attribute) return std::nullopt;
  return Finding{rule.factor, rule.target, std::move(*attribute)};
}

}  // namespace

std::string AttributeSource::to_string() const {
  switch (kind) {
    case Kind::Literal: return "literal:" + value;
    case Kind::CaptureArg: return fmt::format("arg:{}", index);
    case Kind::PayloadKey: return "key:" + value;
    case Kind::MatchedArg: return fmt::format("match:{}", index);
    case Kind::Group: return fmt::format("group:{}", index);
  }
  return {};
}

RuleSet::RuleSet(std::vector<ParsingRule> rules, std::string version)
    : rules_(std::move(rules)), version_(std::move(version)) {}

std::vector<Factor> RuleSet::missing_factors() const {
  std::vector<Factor> missing;
  for (auto f : kAllFactors) {
    if (std::none_of(rules_.begin(), rules_.end(), [f](const auto& r) { return r.factor == f; })) {
      missing.push_back(f);
    }
  }
  return missing;
}

RuleSet load_rules(std::string_view source) {
  std::vector<ParsingRule> rules;
  std::set<std::string, std::less<>> ids;
  std::string version = "unversioned";

  text::for_each_line(source, [&](std::size_t line_no, std::string_view line) {
    const auto trimmed = text::trim(line);
    if (trimmed.empty() || trimmed.front() == '#') return;
    if (trimmed.starts_with("@version")) {
      version = std::string(text::trim(trimmed.substr(8)));
      return;
    }
    auto rule = parse_rule(line_no, trimmed);
    if (!ids.insert(rule.id).second) {
      throw Error(ErrorKind::DuplicateRuleId, fmt::format("rule id '{}' defined twice", rule.id));
    }
    rules.push_back(std::move(rule));
  });

  if (rules.empty()) throw LineError(ErrorKind::RuleSyntax, 0, "rule source defines no rules");
  return RuleSet(std::move(rules), std::move(version));
}

RuleSet load_rules_file(const std::string& path) { return load_rules(read_file(path)); }

const RuleSet& default_rules() {
  static const RuleSet rules = load_rules(default_rules_text());
  return rules;
}

std::optional<Finding> match_record(const ParsingRule& rule, const SyscallRecord& rec) {
  if (rule.kind != RuleKind::SyscallPattern) return std::nullopt;
  return match_values(
      rule, rec.name, rec.args, [&](std::size_t i) { return rec.args[i]; },
      [&](const AttributeSource& src) -> std::optional<std::string> {
        if (src.index < rec.args.size()) return rec.args[src.index];
        return std::nullopt;
      });
}

std::optional<Finding> match_record(const ParsingRule& rule, const SandboxEvent& ev) {
  if (rule.kind != RuleKind::EventPattern) return std::nullopt;
  std::vector<std::string> entries;
  std::vector<const std::string*> values;
  entries.reserve(ev.payload.size());
  for (const auto& [k, v] : ev.payload) {
    entries.push_back(k + "=" + v);
    values.push_back(&v);
  }
  return match_values(
      rule, to_string(ev.channel), entries, [&](std::size_t i) { return *values[i]; },
      [&](const AttributeSource& src) -> std::optional<std::string> {
        auto it = ev.payload.find(src.value);
        if (it == ev.payload.end()) return std::nullopt;
        return it->second;
      });
}

std::vector<Finding> find_all(const RuleSet& rules, const IntegratedSystemLog& log) {
  std::vector<Finding> out;
  for (const auto& rule : rules.rules()) {
    if (rule.kind == RuleKind::SyscallPattern) {
      for (const auto& rec : log.records()) {
        if (auto f = match_record(rule, rec)) out.push_back(std::move(*f));
      }
    } else {
      for (const auto& ev : log.events()) {
        if (auto f = match_record(rule, ev)) out.push_back(std::move(*f));
      }
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace droidprof
