#include "droidprof/pattern.hpp"

#include <stdexcept>

#include "text.hpp"

namespace droidprof {

GlobPattern::GlobPattern(std::string_view source) : source_(source) {
  std::string literal;
  auto flush = [&] {
    if (!literal.empty()) {
      tokens_.push_back({Token::Kind::Literal, std::move(literal), {}});
      literal.clear();
    }
  };

  for (std::size_t i = 0; i < source.size(); ++i) {
    const char c = source[i];
    switch (c) {
      case '\\':
        if (++i == source.size()) throw std::invalid_argument("trailing backslash in pattern");
        literal += source[i];
        break;
      case '*':
        flush();
        // Collapse runs of stars.
        if (tokens_.empty() || tokens_.back().kind != Token::Kind::Star) {
          tokens_.push_back({Token::Kind::Star, {}, {}});
        }
        break;
      case '?':
        flush();
        tokens_.push_back({Token::Kind::AnyChar, {}, {}});
        break;
      case '{': {
        flush();
        const auto close = source.find('}', i + 1);
        if (close == std::string_view::npos) throw std::invalid_argument("unbalanced '{' in pattern");
        const auto body = source.substr(i + 1, close - i - 1);
        if (body.find('{') != std::string_view::npos) {
          throw std::invalid_argument("nested groups are not supported");
        }
        Token group{Token::Kind::Group, {}, {}};
        for (auto alt : text::split(body, '|')) {
          alt = text::trim(alt);
          if (alt.empty()) throw std::invalid_argument("empty alternative in pattern group");
          group.alternatives.emplace_back(alt);
        }
        tokens_.push_back(std::move(group));
        ++group_count_;
        i = close;
        break;
      }
      case '}':
        throw std::invalid_argument("unbalanced '}' in pattern");
      default:
        literal += c;
    }
  }
  flush();
}

std::optional<std::vector<std::string>> GlobPattern::match(std::string_view text) const {
  std::vector<std::string> captures;
  captures.reserve(group_count_);
  if (!match_from(0, text, captures)) return std::nullopt;
  return captures;
}

bool GlobPattern::match_from(std::size_t token, std::string_view text,
                             std::vector<std::string>& captures) const {
  if (token == tokens_.size()) return text.empty();
  const Token& t = tokens_[token];
  switch (t.kind) {
    case Token::Kind::Literal:
      return text.starts_with(t.literal) &&
             match_from(token + 1, text.substr(t.literal.size()), captures);
    case Token::Kind::AnyChar:
      return !text.empty() && match_from(token + 1, text.substr(1), captures);
    case Token::Kind::Star:
      // Trailing star swallows the rest.
      if (token + 1 == tokens_.size()) return true;
      for (std::size_t skip = 0; skip <= text.size(); ++skip) {
        if (match_from(token + 1, text.substr(skip), captures)) return true;
      }
      return false;
    case Token::Kind::Group:
      for (const auto& alt : t.alternatives) {
        if (!text.starts_with(alt)) continue;
        captures.push_back(alt);
        if (match_from(token + 1, text.substr(alt.size()), captures)) return true;
        captures.pop_back();
      }
      return false;
  }
  return false;
}

}  // namespace droidprof
