#include "rfm/error.hpp"

namespace rfm {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::SketchTooWide: return "SketchTooWide";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::ZeroRow: return "ZeroRow";
    case ErrorCode::FactorizationFailure: return "FactorizationFailure";
    case ErrorCode::LineSearchFailure: return "LineSearchFailure";
    case ErrorCode::EmptyInterval: return "EmptyInterval";
    case ErrorCode::OrderTooHigh: return "OrderTooHigh";
    case ErrorCode::EmptyInterior: return "EmptyInterior";
    case ErrorCode::OutsideDomain: return "OutsideDomain";
    case ErrorCode::UnknownProblem: return "UnknownProblem";
    case ErrorCode::NoExactSolution: return "NoExactSolution";
    case ErrorCode::IntegrationFailure: return "IntegrationFailure";
    case ErrorCode::ZeroReference: return "ZeroReference";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace rfm
