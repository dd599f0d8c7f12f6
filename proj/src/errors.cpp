#include "netrisk/errors.hpp"

namespace netrisk {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidLiabilities: return "InvalidLiabilities";
    case ErrorKind::ZeroObligationRow: return "ZeroObligationRow";
    case ErrorKind::ColumnSumViolation: return "ColumnSumViolation";
    case ErrorKind::InvalidNetwork: return "InvalidNetwork";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NegativeCashFlow: return "NegativeCashFlow";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::SolverFailure: return "SolverFailure";
    case ErrorKind::UnboundedVariable: return "UnboundedVariable";
    case ErrorKind::InvalidModel: return "InvalidModel";
    case ErrorKind::GenerationExhausted: return "GenerationExhausted";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::InfeasibleSpec: return "InfeasibleSpec";
    case ErrorKind::UpperBoundNotMember: return "UpperBoundNotMember";
    case ErrorKind::Parse: return "Parse";
  }
  return "Unknown";
}

}  // namespace netrisk
