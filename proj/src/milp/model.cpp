#include "netrisk/milp/model.hpp"

#include "netrisk/errors.hpp"

#include <algorithm>
#include <cmath>

namespace netrisk::milp {

std::vector<Term> normalize_terms(std::vector<Term> terms) {
  std::stable_sort(terms.begin(), terms.end(),
                   [](const Term& a, const Term& b) { return a.var < b.var; });
  std::vector<Term> out;
  out.reserve(terms.size());
  for (const Term& t : terms) {
    if (!out.empty() && out.back().var == t.var) {
      out.back().coef += t.coef;
    } else {
      out.push_back(t);
    }
  }
  std::erase_if(out, [](const Term& t) { return t.coef == 0.0; });
  return out;
}

int Model::add_continuous(std::string name, double lower, double upper) {
  vars_.push_back({std::move(name), lower, upper, VarType::Continuous});
  return num_variables() - 1;
}

int Model::add_binary(std::string name) {
  vars_.push_back({std::move(name), 0.0, 1.0, VarType::Binary});
  return num_variables() - 1;
}

int Model::add_constraint(std::string name, std::vector<Term> terms, RowSense sense, double rhs) {
  rows_.push_back({std::move(name), normalize_terms(std::move(terms)), sense, rhs});
  return num_constraints() - 1;
}

void Model::set_objective(ObjSense sense, std::vector<Term> terms, double offset) {
  obj_ = {sense, normalize_terms(std::move(terms)), offset};
}

int Model::num_binaries() const noexcept {
  return static_cast<int>(std::count_if(vars_.begin(), vars_.end(), [](const Variable& v) {
    return v.type == VarType::Binary;
  }));
}

void Model::validate() const {
  auto check_terms = [&](const std::vector<Term>& terms, const std::string& where) {
    for (const Term& t : terms) {
      if (t.var < 0 || t.var >= num_variables()) {
        throw Error(ErrorKind::InvalidModel, where + ": variable index out of range");
      }
      if (!std::isfinite(t.coef)) {
        throw Error(ErrorKind::InvalidModel, where + ": non-finite coefficient");
      }
    }
  };
  for (const Variable& v : vars_) {
    if (std::isnan(v.lower) || std::isnan(v.upper) || v.lower > v.upper) {
      throw Error(ErrorKind::InvalidModel, "variable " + v.name + " has invalid bounds");
    }
    if (v.type == VarType::Binary && (v.lower != 0.0 || v.upper != 1.0)) {
      throw Error(ErrorKind::InvalidModel, "binary variable " + v.name + " must have bounds [0,1]");
    }
  }
  for (const Constraint& c : rows_) {
    check_terms(c.terms, "constraint " + c.name);
    if (!std::isfinite(c.rhs)) {
      throw Error(ErrorKind::InvalidModel, "constraint " + c.name + " has non-finite rhs");
    }
  }
  check_terms(obj_.terms, "objective");
  if (!std::isfinite(obj_.offset)) throw Error(ErrorKind::InvalidModel, "non-finite objective offset");
}

double Model::evaluate_objective(std::span<const double> x) const {
  double v = obj_.offset;
  for (const Term& t : obj_.terms) v += t.coef * x[static_cast<std::size_t>(t.var)];
  return v;
}

double Model::max_violation(std::span<const double> x) const {
  double worst = 0.0;
  for (std::size_t j = 0; j < vars_.size(); ++j) {
    const Variable& v = vars_[j];
    worst = std::max({worst, v.lower - x[j], x[j] - v.upper});
    if (v.type == VarType::Binary) worst = std::max(worst, std::abs(x[j] - std::round(x[j])));
  }
  for (const Constraint& c : rows_) {
    double act = 0.0;
    for (const Term& t : c.terms) act += t.coef * x[static_cast<std::size_t>(t.var)];
    switch (c.sense) {
      case RowSense::LessEqual: worst = std::max(worst, act - c.rhs); break;
      case RowSense::GreaterEqual: worst = std::max(worst, c.rhs - act); break;
      case RowSense::Equal: worst = std::max(worst, std::abs(act - c.rhs)); break;
    }
  }
  return worst;
}

}  // namespace netrisk::milp
