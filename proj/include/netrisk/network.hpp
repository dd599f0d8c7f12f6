#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace netrisk {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

enum class ModelKind { SignedEisenbergNoe, RogersVeraart };

/// Clearing model attached to a network. For Rogers-Veraart, `alpha` is the
/// fraction of operating cash flow and `beta` the fraction of incoming
/// payments that a defaulting node can still pay out.
struct Variant {
  ModelKind kind = ModelKind::SignedEisenbergNoe;
  double alpha = 1.0;
  double beta = 1.0;

  static Variant signed_en() { return {}; }
  static Variant rogers_veraart(double alpha, double beta) {
    return {ModelKind::RogersVeraart, alpha, beta};
  }

  [[nodiscard]] bool is_rv() const noexcept { return kind == ModelKind::RogersVeraart; }
  friend bool operator==(const Variant&, const Variant&) = default;
};

inline constexpr double kRowStochasticTol = 1e-9;

struct Violation {
  std::string rule;
  int index = -1;  // node (row/column) index, -1 for network-wide rules
  double magnitude = 0.0;
};

/// Interbank network in relative-liabilities form: pi(i, j) is the share of
/// node i's total obligation pbar(i) owed to node j.
class FinancialNetwork {
 public:
  /// Builds (pi, pbar) from nominal liabilities l(i, j) owed by i to j.
  /// Throws ZeroObligationRow / ColumnSumViolation / InvalidLiabilities.
  static FinancialNetwork from_liabilities(const Matrix& liabilities, Variant variant);

  /// Validating constructor; throws InvalidNetwork listing the violations.
  static FinancialNetwork create(Matrix pi, Vector pbar, Variant variant);

  /// No checks at all; for diagnostics through validate().
  static FinancialNetwork unchecked(Matrix pi, Vector pbar, Variant variant);

  [[nodiscard]] int size() const noexcept { return static_cast<int>(pbar_.size()); }
  [[nodiscard]] const Matrix& pi() const noexcept { return pi_; }
  [[nodiscard]] const Vector& pbar() const noexcept { return pbar_; }
  [[nodiscard]] const Variant& variant() const noexcept { return variant_; }

  /// l(i, j) = pi(i, j) * pbar(i).
  [[nodiscard]] Matrix liabilities() const;
  /// pi^T p, the payments received by each node.
  [[nodiscard]] Vector inflows(const Vector& p) const;
  [[nodiscard]] double total_obligations() const { return pbar_.sum(); }

  [[nodiscard]] FinancialNetwork with_variant(Variant variant) const;

 private:
  FinancialNetwork(Matrix pi, Vector pbar, Variant variant)
      : pi_(std::move(pi)), pbar_(std::move(pbar)), variant_(variant) {}

  Matrix pi_;
  Vector pbar_;
  Variant variant_;
};

/// Every violated network invariant; empty means valid.
[[nodiscard]] std::vector<Violation> validate(const FinancialNetwork& net);

[[nodiscard]] std::string describe(const std::vector<Violation>& violations);

}  // namespace netrisk
