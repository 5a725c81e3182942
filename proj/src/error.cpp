#include "relx/error.hpp"

namespace relx {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kIo: return "Io";
    case ErrorCode::kParse: return "ParseError";
    case ErrorCode::kValidation: return "ValidationError";
    case ErrorCode::kUnknownToken: return "UnknownToken";
    case ErrorCode::kMalformed: return "Malformed";
    case ErrorCode::kUnknownPair: return "UnknownPair";
    case ErrorCode::kMissingGold: return "MissingGold";
    case ErrorCode::kCorruptProvenance: return "CorruptProvenance";
    case ErrorCode::kEmptyCorpus: return "EmptyCorpus";
    case ErrorCode::kEmpty: return "Empty";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kSchemaMismatch: return "SchemaMismatch";
    case ErrorCode::kVersionMismatch: return "VersionMismatch";
    case ErrorCode::kTransport: return "Transport";
    case ErrorCode::kProtocol: return "Protocol";
    case ErrorCode::kBadDistribution: return "BadDistribution";
  }
  return "Unknown";
}

static std::string format_what(ErrorCode code, const std::string& message,
                               std::size_t line) {
  std::string what(error_code_name(code));
  if (line > 0) what += " (line " + std::to_string(line) + ")";
  what += ": ";
  what += message;
  return what;
}

Error::Error(ErrorCode code, const std::string& message, std::size_t line)
    : std::runtime_error(format_what(code, message, line)),
      code_(code),
      line_(line),
      message_(message) {}

Error Error::with_context(std::string_view context) const {
  return Error(code_, std::string(context) + message_, line_);
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kIo:
    case ErrorCode::kVersionMismatch:
    case ErrorCode::kTransport:
    case ErrorCode::kProtocol:
    case ErrorCode::kBadDistribution:
      return 2;
    default:
      return 1;
  }
}

}  // namespace relx
