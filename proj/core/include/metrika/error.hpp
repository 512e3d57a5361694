#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace metrika {

enum class ErrorCode {
  // logic
  SyntaxError,
  UnknownRelation,
  ArityMismatch,
  ConstantOutOfRange,
  FreeVariableInCondition,
  InvalidSignature,
  // structures
  ExtensionViolatesAxioms,
  QuotientIllDefined,
  InvalidStructure,
  // eval
  UnboundVariable,
  NotPrenexUnsupported,
  // polish-space
  IndexOutOfPrefix,
  LengthMismatch,
  PointsOutOfPrefix,
  NotPi2Condition,
  // urysohn
  SizeMismatch,
  PartialInfeasible,
  PreconditionViolated,
  CoefficientOutOfRange,
  InvalidConfiguration,
  // synth
  SeedViolatesTheory,
  NotAPrefix,
  InvalidTheory,
  // random
  RejectionBudgetExceeded,
  // compare
  BudgetExhausted,
  // io / cli
  FormatError,
  SchemaMismatch,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Base exception for every domain error raised by the library.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised by the formula and condition parsers.
class ParseError : public Error {
 public:
  ParseError(ErrorCode code, std::size_t position, const std::string& message)
      : Error(code, message + " at offset " + std::to_string(position)), position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace metrika
