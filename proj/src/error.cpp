#include "act/error.hpp"

namespace act {

std::string_view error_token(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::Configuration: return "configuration";
    case ErrorCode::Parameter: return "parameter";
    case ErrorCode::EmptyCorpus: return "empty-corpus";
    case ErrorCode::DegenerateTerm: return "degenerate-term";
    case ErrorCode::EmptyQuery: return "empty-query";
    case ErrorCode::InsufficientAnchor: return "insufficient-anchor";
    case ErrorCode::EmptyCandidate: return "empty-candidate";
    case ErrorCode::SampleSize: return "sample-size";
    case ErrorCode::Schedule: return "schedule";
    case ErrorCode::UndefinedCorrelation: return "undefined-correlation";
    case ErrorCode::UndefinedAlpha: return "undefined-alpha";
    case ErrorCode::Coverage: return "coverage";
    case ErrorCode::NothingToAblate: return "nothing-to-ablate";
    case ErrorCode::Schema: return "schema";
    case ErrorCode::Io: return "io";
  }
  return "unknown";
}

}  // namespace act
