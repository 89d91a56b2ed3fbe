#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace act {

enum class ErrorCode {
  Configuration,
  Parameter,
  EmptyCorpus,
  DegenerateTerm,
  EmptyQuery,
  InsufficientAnchor,
  EmptyCandidate,
  SampleSize,
  Schedule,
  UndefinedCorrelation,
  UndefinedAlpha,
  Coverage,
  NothingToAblate,
  Schema,
  Io,
};

/// Stable machine-readable token for an error code, e.g. "empty-query".
std::string_view error_token(ErrorCode code) noexcept;

/// Domain error raised by every pipeline stage. The token is what the CLI
/// prints on stderr, so it must stay stable.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  std::string_view token() const noexcept { return error_token(code_); }

 private:
  ErrorCode code_;
};

}  // namespace act
