#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace droidprof {

// Anchored glob pattern: `*` matches any run of characters, `?` exactly one,
// and `{a|b|c}` one of the listed literal alternatives. A backslash makes
// the next character literal. Groups do not nest; alternatives are trimmed.
//
// A successful match reports, for every group in pattern order, the
// alternative that matched.
class GlobPattern {
 public:
  // Throws std::invalid_argument on unbalanced or nested braces, an empty
  // group, or a trailing backslash.
  explicit GlobPattern(std::string_view source);

  const std::string& source() const { return source_; }
  std::size_t group_count() const { return group_count_; }

  bool matches(std::string_view text) const { return match(text).has_value(); }
  std::optional<std::vector<std::string>> match(std::string_view text) const;

 private:
  struct Token {
    enum class Kind { Literal, Star, AnyChar, Group } kind;
    std::string literal;
    std::vector<std::string> alternatives;
  };

  bool match_from(std::size_t token, std::string_view text, std::vector<std::string>& captures) const;

  std::string source_;
  std::vector<Token> tokens_;
  std::size_t group_count_ = 0;
};

}  // namespace droidprof
