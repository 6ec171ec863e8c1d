#pragma once

#include <stdexcept>
#include <string>

namespace rfm {

enum class ErrorCode {
  SketchTooWide,
  DimensionMismatch,
  RankDeficient,
  ZeroRow,
  FactorizationFailure,
  LineSearchFailure,
  EmptyInterval,
  OrderTooHigh,
  EmptyInterior,
  OutsideDomain,
  UnknownProblem,
  NoExactSolution,
  IntegrationFailure,
  ZeroReference,
  ConfigError,
  IoError,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace rfm
