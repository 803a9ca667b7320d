#pragma once

#include <stdexcept>
#include <string>

namespace nlasso {

/// Machine-checkable failure kinds for everything the library can reject.
enum class ErrorCode {
  InvalidArgument,
  // graph construction / queries
  SelfLoop,
  DuplicateEdge,
  NonPositiveWeight,
  InvalidNodeId,
  Disconnected,
  EdgeNotInGraph,
  EmptySet,
  InvalidPartition,
  ClusterDisconnected,
  NumericalRankDeficiency,
  // signal model
  EmptyTrainingSet,
  SizeOutOfRange,
  NonPositiveEta,
  // solver
  NonFiniteIterate,
  // flow certification
  NoFeasibleL,
  LTooSmall,
  // experiments
  HypothesisViolated,
  GeneratorExhausted,
  // i/o
  IoFailure,
  ParseFailure,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

inline const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::SelfLoop: return "SelfLoop";
    case ErrorCode::DuplicateEdge: return "DuplicateEdge";
    case ErrorCode::NonPositiveWeight: return "NonPositiveWeight";
    case ErrorCode::InvalidNodeId: return "InvalidNodeId";
    case ErrorCode::Disconnected: return "Disconnected";
    case ErrorCode::EdgeNotInGraph: return "EdgeNotInGraph";
    case ErrorCode::EmptySet: return "EmptySet";
    case ErrorCode::InvalidPartition: return "InvalidPartition";
    case ErrorCode::ClusterDisconnected: return "ClusterDisconnected";
    case ErrorCode::NumericalRankDeficiency: return "NumericalRankDeficiency";
    case ErrorCode::EmptyTrainingSet: return "EmptyTrainingSet";
    case ErrorCode::SizeOutOfRange: return "SizeOutOfRange";
    case ErrorCode::NonPositiveEta: return "NonPositiveEta";
    case ErrorCode::NonFiniteIterate: return "NonFiniteIterate";
    case ErrorCode::NoFeasibleL: return "NoFeasibleL";
    case ErrorCode::LTooSmall: return "LTooSmall";
    case ErrorCode::HypothesisViolated: return "HypothesisViolated";
    case ErrorCode::GeneratorExhausted: return "GeneratorExhausted";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::ParseFailure: return "ParseFailure";
  }
  return "UnknownError";
}

} // namespace nlasso
