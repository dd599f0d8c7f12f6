#include "netrisk/milp/lp_format.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string_view>

namespace netrisk::milp {

namespace {

constexpr int kTermsPerLine = 6;

std::string number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

bool allowed(char c) {
  if (std::isalnum(static_cast<unsigned char>(c))) return true;
  constexpr std::string_view extra = "!\"#$%&()/,.;?@_`'{}|~";
  return extra.find(c) != std::string_view::npos;
}

void write_terms(std::ostringstream& os, const std::vector<Term>& terms,
                 const std::vector<std::string>& names) {
  int on_line = 0;
  bool first = true;
  for (const Term& t : terms) {
    if (on_line == kTermsPerLine) {
      os << "\n   ";
      on_line = 0;
    }
    const double mag = std::abs(t.coef);
    if (first) {
      os << (t.coef < 0 ? " - " : " ");
    } else {
      os << (t.coef < 0 ? " - " : " + ");
    }
    os << number(mag) << ' ' << names[static_cast<std::size_t>(t.var)];
    first = false;
    ++on_line;
  }
}

}  // namespace

std::string lp_name(const std::string& name, const std::string& fallback) {
  if (name.empty()) return fallback;
  std::string out;
  out.reserve(name.size() + 1);
  for (char c : name) out.push_back(allowed(c) ? c : '_');
  const char first = out.front();
  if (std::isdigit(static_cast<unsigned char>(first)) || first == '.' || first == 'e' || first == 'E') {
    out.insert(out.begin(), '_');
  }
  return out;
}

std::string export_lp(const Model& model) {
  std::vector<std::string> names;
  names.reserve(static_cast<std::size_t>(model.num_variables()));
  for (int j = 0; j < model.num_variables(); ++j) {
    names.push_back(lp_name(model.variable(j).name, "x" + std::to_string(j)));
  }

  std::ostringstream os;
  const Objective& obj = model.objective();
  os << (obj.sense == ObjSense::Maximize ? "Maximize" : "Minimize") << "\n obj:";
  if (obj.terms.empty() && model.num_variables() > 0) {
    os << " 0 " << names.front();
  } else {
    write_terms(os, obj.terms, names);
  }
  if (obj.offset != 0.0) os << (obj.offset < 0 ? " - " : " + ") << number(std::abs(obj.offset));
  os << "\nSubject To\n";
  for (int i = 0; i < model.num_constraints(); ++i) {
    const Constraint& c = model.constraints()[static_cast<std::size_t>(i)];
    os << ' ' << lp_name(c.name, "c" + std::to_string(i)) << ':';
    if (c.terms.empty() && model.num_variables() > 0) {
      os << " 0 " << names.front();
    } else {
      write_terms(os, c.terms, names);
    }
    switch (c.sense) {
      case RowSense::LessEqual: os << " <= "; break;
      case RowSense::GreaterEqual: os << " >= "; break;
      case RowSense::Equal: os << " = "; break;
    }
    os << number(c.rhs) << '\n';
  }
  os << "Bounds\n";
  for (int j = 0; j < model.num_variables(); ++j) {
    const Variable& v = model.variable(j);
    if (v.type == VarType::Binary) continue;
    const std::string& nm = names[static_cast<std::size_t>(j)];
    const bool lo_inf = !std::isfinite(v.lower);
    const bool up_inf = !std::isfinite(v.upper);
    if (lo_inf && up_inf) {
      os << ' ' << nm << " free\n";
    } else if (up_inf) {
      os << ' ' << nm << " >= " << number(v.lower) << '\n';
    } else {
      os << ' ' << (lo_inf ? std::string("-inf") : number(v.lower)) << " <= " << nm
         << " <= " << number(v.upper) << '\n';
    }
  }
  os << "Binaries\n";
  int on_line = 0;
  for (int j = 0; j < model.num_variables(); ++j) {
    if (model.variable(j).type != VarType::Binary) continue;
    os << ' ' << names[static_cast<std::size_t>(j)];
    if (++on_line == 10) {
      os << '\n';
      on_line = 0;
    }
  }
  if (on_line > 0) os << '\n';
  os << "End\n";
  return os.str();
}

}  // namespace netrisk::milp
