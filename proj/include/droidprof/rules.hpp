#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "droidprof/behavior.hpp"
#include "droidprof/log.hpp"
#include "droidprof/pattern.hpp"

namespace droidprof {

enum class RuleKind { SyscallPattern, EventPattern };

// Where a finding's attribute comes from.
struct AttributeSource {
  enum class Kind {
    Literal,     // fixed text
    CaptureArg,  // syscall argument at `index`
    PayloadKey,  // event payload value under `key`
    MatchedArg,  // the argument (or payload value) that satisfied arg pattern `index`
    Group,       // alternative chosen by the `index`-th `{...}` group of the arg patterns
  };
  Kind kind = Kind::Literal;
  std::string value;  // literal text or payload key
  std::size_t index = 0;

  std::string to_string() const;
};

struct ParsingRule {
  std::string id;
  Factor factor = Factor::SendingSMS;
  RuleKind kind = RuleKind::SyscallPattern;
  GlobPattern name_pattern{"*"};
  // For syscalls each pattern must match some argument; for events each must
  // match some payload entry rendered as `key=value`.
  std::vector<GlobPattern> arg_patterns;
  std::string target;
  AttributeSource attribute;
};

struct Finding {
  Factor factor;
  std::string target;
  std::string attribute;

  friend bool operator==(const Finding&, const Finding&) = default;
  friend auto operator<=>(const Finding&, const Finding&) = default;
};

class RuleSet {
 public:
  RuleSet(std::vector<ParsingRule> rules, std::string version);

  const std::vector<ParsingRule>& rules() const { return rules_; }
  const std::string& version() const { return version_; }

  // Factors no rule produces. Non-empty means the set cannot detect every
  // behavior; loading still succeeds.
  std::vector<Factor> missing_factors() const;

 private:
  std::vector<ParsingRule> rules_;
  std::string version_;
};

// Rule file grammar, one rule per line:
//   <id> | <factor> | <kind> | <name_pattern> | <arg_pattern;...> | <target> | <attribute_source>
// kind is `syscall` or `event`; attribute_source is one of `literal:<text>`,
// `arg:<i>`, `key:<name>`, `match:<i>`, `group:<i>`. `|` and `;` inside
// `{...}` belong to the pattern. `#` starts a comment line; an optional
// `@version <text>` line names the set.
//
// Throws LineError(RuleSyntax) and Error(DuplicateRuleId).
RuleSet load_rules(std::string_view source);
RuleSet load_rules_file(const std::string& path);

// Text of the shipped rules/default.rules, compiled in.
std::string_view default_rules_text();
const RuleSet& default_rules();

std::optional<Finding> match_record(const ParsingRule& rule, const SyscallRecord& rec);
std::optional<Finding> match_record(const ParsingRule& rule, const SandboxEvent& ev);

// All findings of every rule over every record, sorted.
std::vector<Finding> find_all(const RuleSet& rules, const IntegratedSystemLog& log);

}  // namespace droidprof
