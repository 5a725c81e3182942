#ifndef RELX_ERROR_HPP
#define RELX_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace relx {

enum class ErrorCode {
  kIo,
  kParse,
  kValidation,
  kUnknownToken,
  kMalformed,
  kUnknownPair,
  kMissingGold,
  kCorruptProvenance,
  kEmptyCorpus,
  kEmpty,
  kLengthMismatch,
  kSchemaMismatch,
  kVersionMismatch,
  kTransport,
  kProtocol,
  kBadDistribution,
};

std::string_view error_code_name(ErrorCode code);

// All library failures are reported as relx::Error carrying a code. Errors
// tied to an input line carry a 1-based line number (0 when not applicable).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::size_t line = 0);

  ErrorCode code() const { return code_; }
  std::size_t line() const { return line_; }
  const std::string& message() const { return message_; }

  // Same error with a context prefix, e.g. "[native/pre_entity] ".
  Error with_context(std::string_view context) const;

 private:
  ErrorCode code_;
  std::size_t line_;
  std::string message_;
};

// Process exit code for an error: 2 for I/O, file-format and protocol
// failures, 1 for everything else (validation).
int exit_code_for(ErrorCode code);

}  // namespace relx

#endif  // RELX_ERROR_HPP
