#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace droidprof {

enum class ErrorKind {
  MalformedLine,
  EmptyLog,
  SampleIdMismatch,
  RuleSyntax,
  DuplicateRuleId,
  CorruptProfile,
  EmptyUrl,
  InvalidWeights,
  CorruptStore,
  InvalidK,
  InsufficientSamples,
  DegenerateLabels,
  InvalidSpec,
};

const char* to_string(ErrorKind kind);

// Every failure the library reports carries a kind, so callers (the CLI in
// particular) can map errors to exit codes without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Errors tied to a position in a line-oriented input. Line numbers are
// 1-based; 0 means "the input as a whole".
class LineError : public Error {
 public:
  LineError(ErrorKind kind, std::size_t line, const std::string& what);

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace droidprof
