#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace netrisk {

enum class ErrorKind {
  InvalidLiabilities,
  ZeroObligationRow,
  ColumnSumViolation,
  InvalidNetwork,
  DimensionMismatch,
  NegativeCashFlow,
  NoConvergence,
  SolverFailure,
  UnboundedVariable,
  InvalidModel,
  GenerationExhausted,
  InvalidConfig,
  InfeasibleSpec,
  UpperBoundNotMember,
  Parse,
};

[[nodiscard]] std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace netrisk
