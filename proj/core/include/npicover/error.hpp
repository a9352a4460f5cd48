#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace npicover {

enum class ErrorCode {
  kInvalidParams,
  kInvalidNode,
  kNotConnected,
  kNonPositiveRate,
  kNonPositiveWeight,
  kAsymmetricWeight,
  kDuplicateEdge,
  kSelfLoop,
  kNotAnEdge,
  kNoConvergence,
  kInvalidInitialState,
  kNonFiniteState,
  kThresholdNotMet,
  kInfeasible,
  kZeroGainStall,
  kTooManyClusters,
  kPropositionViolation,
  kInfeasibleAfterRetries,
  kConfig,
  kIo,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Iterative solver gave up; the last iterate is kept for diagnostics.
class NoConvergenceError : public Error {
 public:
  NoConvergenceError(const std::string& message, long iterations,
                     std::vector<double> last_iterate)
      : Error(ErrorCode::kNoConvergence, message),
        iterations_(iterations),
        last_iterate_(std::move(last_iterate)) {}

  long iterations() const noexcept { return iterations_; }
  const std::vector<double>& last_iterate() const noexcept {
    return last_iterate_;
  }

 private:
  long iterations_;
  std::vector<double> last_iterate_;
};

// J-bar over the full cluster set is still positive.
class InfeasibleError : public Error {
 public:
  InfeasibleError(const std::string& message, double jbar_all)
      : Error(ErrorCode::kInfeasible, message), jbar_all_(jbar_all) {}

  double jbar_all() const noexcept { return jbar_all_; }

 private:
  double jbar_all_;
};

}  // namespace npicover
