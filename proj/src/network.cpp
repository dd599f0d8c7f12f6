#include "netrisk/network.hpp"

#include "netrisk/errors.hpp"

#include <cmath>
#include <sstream>

namespace netrisk {

namespace {

void check_liabilities(const Matrix& l) {
  if (l.rows() != l.cols() || l.rows() < 1) {
    throw Error(ErrorKind::InvalidLiabilities, "liability matrix must be square and non-empty");
  }
  for (Eigen::Index i = 0; i < l.rows(); ++i) {
    for (Eigen::Index j = 0; j < l.cols(); ++j) {
      const double v = l(i, j);
      if (!std::isfinite(v) || v < 0.0) {
        std::ostringstream os;
        os << "liability l[" << i << "][" << j << "] = " << v << " must be finite and >= 0";
        throw Error(ErrorKind::InvalidLiabilities, os.str());
      }
      if (i == j && v != 0.0) {
        std::ostringstream os;
        os << "diagonal liability l[" << i << "][" << i << "] = " << v << " must be 0";
        throw Error(ErrorKind::InvalidLiabilities, os.str());
      }
    }
  }
}

}  // namespace

FinancialNetwork FinancialNetwork::from_liabilities(const Matrix& liabilities, Variant variant) {
  check_liabilities(liabilities);
  const auto n = liabilities.rows();
  Vector pbar = liabilities.rowwise().sum();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(pbar(i) > 0.0)) {
      throw Error(ErrorKind::ZeroObligationRow,
                  "node " + std::to_string(i) + " has no obligations (row sums to 0)");
    }
  }
  Matrix pi = liabilities;
  for (Eigen::Index i = 0; i < n; ++i) pi.row(i) /= pbar(i);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double col = pi.col(j).sum();
    if (col >= static_cast<double>(n)) {
      std::ostringstream os;
      os << "column " << j << " of pi sums to " << col << " >= n = " << n;
      throw Error(ErrorKind::ColumnSumViolation, os.str());
    }
  }
  return create(std::move(pi), std::move(pbar), variant);
}

FinancialNetwork FinancialNetwork::create(Matrix pi, Vector pbar, Variant variant) {
  FinancialNetwork net(std::move(pi), std::move(pbar), variant);
  if (auto v = validate(net); !v.empty()) {
    throw Error(ErrorKind::InvalidNetwork, describe(v));
  }
  return net;
}

FinancialNetwork FinancialNetwork::unchecked(Matrix pi, Vector pbar, Variant variant) {
  return FinancialNetwork(std::move(pi), std::move(pbar), variant);
}

Matrix FinancialNetwork::liabilities() const { return pbar_.asDiagonal() * pi_; }

Vector FinancialNetwork::inflows(const Vector& p) const {
  if (p.size() != pbar_.size()) {
    throw Error(ErrorKind::DimensionMismatch, "payment vector length does not match network size");
  }
  return pi_.transpose() * p;
}

FinancialNetwork FinancialNetwork::with_variant(Variant variant) const {
  return create(pi_, pbar_, variant);
}

std::vector<Violation> validate(const FinancialNetwork& net) {
  std::vector<Violation> out;
  const Matrix& pi = net.pi();
  const Vector& pbar = net.pbar();
  const auto n = pbar.size();
  if (n < 1 || pi.rows() != n || pi.cols() != n) {
    out.push_back({"dimensions", -1, static_cast<double>(pi.rows())});
    return out;
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (pi(i, i) != 0.0) out.push_back({"zero diagonal", static_cast<int>(i), std::abs(pi(i, i))});
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!(pi(i, j) >= 0.0)) {
        out.push_back({"pi nonnegative", static_cast<int>(i), pi(i, j)});
      }
    }
    const double row = pi.row(i).sum();
    if (!(std::abs(row - 1.0) <= kRowStochasticTol)) {
      out.push_back({"row-stochastic", static_cast<int>(i), row - 1.0});
    }
    const double col = pi.col(i).sum();
    if (!(col < static_cast<double>(n))) {
      out.push_back({"column sum < n", static_cast<int>(i), col - static_cast<double>(n)});
    }
    if (!(pbar(i) > 0.0)) out.push_back({"pbar positive", static_cast<int>(i), pbar(i)});
  }
  const Variant& v = net.variant();
  if (v.is_rv()) {
    if (!(v.alpha > 0.0 && v.alpha <= 1.0)) out.push_back({"alpha in (0,1]", -1, v.alpha});
    if (!(v.beta > 0.0 && v.beta <= 1.0)) out.push_back({"beta in (0,1]", -1, v.beta});
  }
  return out;
}

std::string describe(const std::vector<Violation>& violations) {
  std::ostringstream os;
  bool first = true;
  for (const auto& v : violations) {
    if (!first) os << "; ";
    first = false;
    os << v.rule;
    if (v.index >= 0) os << " at " << v.index;
    os << " (" << v.magnitude << ")";
  }
  return os.str();
}

}  // namespace netrisk
