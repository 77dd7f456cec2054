#include "droidprof/error.hpp"

#include <fmt/format.h>

namespace droidprof {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::MalformedLine: return "MalformedLine";
    case ErrorKind::EmptyLog: return "EmptyLog";
    case ErrorKind::SampleIdMismatch: return "SampleIdMismatch";
    case ErrorKind::RuleSyntax: return "RuleSyntax";
    case ErrorKind::DuplicateRuleId: return "DuplicateRuleId";
    case ErrorKind::CorruptProfile: return "CorruptProfile";
    case ErrorKind::EmptyUrl: return "EmptyUrl";
    case ErrorKind::InvalidWeights: return "InvalidWeights";
    case ErrorKind::CorruptStore: return "CorruptStore";
    case ErrorKind::InvalidK: return "InvalidK";
    case ErrorKind::InsufficientSamples: return "InsufficientSamples";
    case ErrorKind::DegenerateLabels: return "DegenerateLabels";
    case ErrorKind::InvalidSpec: return "InvalidSpec";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(fmt::format("{}: {}", to_string(kind), what)), kind_(kind) {}

LineError::LineError(ErrorKind kind, std::size_t line, const std::string& what)
    : Error(kind, fmt::format("line {}: {}", line, what)), line_(line) {}

}  // namespace droidprof
