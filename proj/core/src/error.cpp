#include "npicover/error.hpp"

namespace npicover {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidParams: return "InvalidParams";
    case ErrorCode::kInvalidNode: return "InvalidNode";
    case ErrorCode::kNotConnected: return "NotConnected";
    case ErrorCode::kNonPositiveRate: return "NonPositiveRate";
    case ErrorCode::kNonPositiveWeight: return "NonPositiveWeight";
    case ErrorCode::kAsymmetricWeight: return "AsymmetricWeight";
    case ErrorCode::kDuplicateEdge: return "DuplicateEdge";
    case ErrorCode::kSelfLoop: return "SelfLoop";
    case ErrorCode::kNotAnEdge: return "NotAnEdge";
    case ErrorCode::kNoConvergence: return "NoConvergence";
    case ErrorCode::kInvalidInitialState: return "InvalidInitialState";
    case ErrorCode::kNonFiniteState: return "NonFiniteState";
    case ErrorCode::kThresholdNotMet: return "ThresholdNotMet";
    case ErrorCode::kInfeasible: return "Infeasible";
    case ErrorCode::kZeroGainStall: return "ZeroGainStall";
    case ErrorCode::kTooManyClusters: return "TooManyClusters";
    case ErrorCode::kPropositionViolation: return "PropositionViolation";
    case ErrorCode::kInfeasibleAfterRetries: return "InfeasibleAfterRetries";
    case ErrorCode::kConfig: return "ConfigError";
    case ErrorCode::kIo: return "IoError";
  }
  return "Unknown";
}

}  // namespace npicover
