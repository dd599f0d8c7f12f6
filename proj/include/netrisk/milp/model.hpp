#pragma once

#include <limits>
#include <span>
#include <string>
#include <vector>

namespace netrisk::milp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class VarType { Continuous, Binary };
enum class RowSense { LessEqual, GreaterEqual, Equal };
enum class ObjSense { Minimize, Maximize };

struct Term {
  int var = 0;
  double coef = 0.0;
};

struct Variable {
  std::string name;
  double lower = 0.0;
  double upper = kInf;
  VarType type = VarType::Continuous;
};

struct Constraint {
  std::string name;
  std::vector<Term> terms;
  RowSense sense = RowSense::LessEqual;
  double rhs = 0.0;
};

struct Objective {
  ObjSense sense = ObjSense::Minimize;
  std::vector<Term> terms;
  double offset = 0.0;
};

/// A mixed-binary linear program. Binary variables always carry [0, 1].
class Model {
 public:
  int add_continuous(std::string name, double lower, double upper);
  int add_binary(std::string name);
  /// Terms on the same variable are merged and zero coefficients dropped.
  int add_constraint(std::string name, std::vector<Term> terms, RowSense sense, double rhs);
  void set_objective(ObjSense sense, std::vector<Term> terms, double offset = 0.0);

  [[nodiscard]] int num_variables() const noexcept { return static_cast<int>(vars_.size()); }
  [[nodiscard]] int num_constraints() const noexcept { return static_cast<int>(rows_.size()); }
  [[nodiscard]] int num_binaries() const noexcept;
  [[nodiscard]] const std::vector<Variable>& variables() const noexcept { return vars_; }
  [[nodiscard]] const std::vector<Constraint>& constraints() const noexcept { return rows_; }
  [[nodiscard]] const Objective& objective() const noexcept { return obj_; }
  [[nodiscard]] const Variable& variable(int j) const { return vars_.at(static_cast<std::size_t>(j)); }

  /// Throws InvalidModel on NaN/inf coefficients, bad indices or inverted bounds.
  void validate() const;

  [[nodiscard]] double evaluate_objective(std::span<const double> x) const;
  /// Largest violation over rows, bounds and (for binaries) integrality.
  [[nodiscard]] double max_violation(std::span<const double> x) const;

 private:
  std::vector<Variable> vars_;
  std::vector<Constraint> rows_;
  Objective obj_;
};

[[nodiscard]] std::vector<Term> normalize_terms(std::vector<Term> terms);

}  // namespace netrisk::milp
