#include "metrika/error.hpp"

namespace metrika {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::UnknownRelation: return "UnknownRelation";
    case ErrorCode::ArityMismatch: return "ArityMismatch";
    case ErrorCode::ConstantOutOfRange: return "ConstantOutOfRange";
    case ErrorCode::FreeVariableInCondition: return "FreeVariableInCondition";
    case ErrorCode::InvalidSignature: return "InvalidSignature";
    case ErrorCode::ExtensionViolatesAxioms: return "ExtensionViolatesAxioms";
    case ErrorCode::QuotientIllDefined: return "QuotientIllDefined";
    case ErrorCode::InvalidStructure: return "InvalidStructure";
    case ErrorCode::UnboundVariable: return "UnboundVariable";
    case ErrorCode::NotPrenexUnsupported: return "NotPrenexUnsupported";
    case ErrorCode::IndexOutOfPrefix: return "IndexOutOfPrefix";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::PointsOutOfPrefix: return "PointsOutOfPrefix";
    case ErrorCode::NotPi2Condition: return "NotPi2Condition";
    case ErrorCode::SizeMismatch: return "SizeMismatch";
    case ErrorCode::PartialInfeasible: return "PartialInfeasible";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::CoefficientOutOfRange: return "CoefficientOutOfRange";
    case ErrorCode::InvalidConfiguration: return "InvalidConfiguration";
    case ErrorCode::SeedViolatesTheory: return "SeedViolatesTheory";
    case ErrorCode::NotAPrefix: return "NotAPrefix";
    case ErrorCode::InvalidTheory: return "InvalidTheory";
    case ErrorCode::RejectionBudgetExceeded: return "RejectionBudgetExceeded";
    case ErrorCode::BudgetExhausted: return "BudgetExhausted";
    case ErrorCode::FormatError: return "FormatError";
    case ErrorCode::SchemaMismatch: return "SchemaMismatch";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace metrika
