#pragma once

#include <stdexcept>
#include <string>

namespace bitvar {

enum class ErrorCode {
  kSingularMatrix,
  kNotSymmetric,
  kNoConvergence,
  kNotPositiveDefinite,
  kNotStationary,
  kDomainError,
  kGenerationTimeout,
  kZeroThreshold,
  kSingularSystem,
  kMissingEdge,
  kInvalidArgument,
  kConfigError,
  kIoError,
};

const char* to_string(ErrorCode code) noexcept;

/// Numerical errors are reported through this exception; `code()` tells the
/// caller which precondition or convergence guarantee broke.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

  /// Config, argument and I/O problems, as opposed to numerical failures.
  bool is_usage_error() const noexcept {
    return code_ == ErrorCode::kConfigError ||
           code_ == ErrorCode::kInvalidArgument ||
           code_ == ErrorCode::kIoError;
  }

 private:
  ErrorCode code_;
};

}  // namespace bitvar
