#include "netrisk/milp/simplex.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>

namespace netrisk::milp {

DenseSimplex::DenseSimplex(const Model& model, SimplexOptions options)
    : model_(&model), opt_(options), nv_(model.num_variables()), m_(model.num_constraints()) {
  const int total = nv_ + m_;
  cols_.resize(static_cast<std::size_t>(total));
  lo_.assign(static_cast<std::size_t>(total), 0.0);
  up_.assign(static_cast<std::size_t>(total), 0.0);
  x_.assign(static_cast<std::size_t>(total), 0.0);
  cost_.assign(static_cast<std::size_t>(total), 0.0);
  pos_.assign(static_cast<std::size_t>(total), -1);

  const auto& rows = model.constraints();
  for (int i = 0; i < m_; ++i) {
    const Constraint& c = rows[static_cast<std::size_t>(i)];
    for (const Term& t : c.terms) cols_[static_cast<std::size_t>(t.var)].push_back({i, t.coef});
    auto& logical = cols_[static_cast<std::size_t>(nv_ + i)];
    logical.push_back({i, -1.0});
    const auto r = static_cast<std::size_t>(nv_ + i);
    switch (c.sense) {
      case RowSense::LessEqual: lo_[r] = -kInf; up_[r] = c.rhs; break;
      case RowSense::GreaterEqual: lo_[r] = c.rhs; up_[r] = kInf; break;
      case RowSense::Equal: lo_[r] = c.rhs; up_[r] = c.rhs; break;
    }
  }
  sign_ = model.objective().sense == ObjSense::Maximize ? -1.0 : 1.0;
  for (const Term& t : model.objective().terms) cost_[static_cast<std::size_t>(t.var)] = sign_ * t.coef;
  reset_basis();
}

void DenseSimplex::reset_basis() {
  basis_.basic.resize(static_cast<std::size_t>(m_));
  basis_.state.assign(static_cast<std::size_t>(nv_ + m_), VarState::AtLower);
  for (int i = 0; i < m_; ++i) {
    basis_.basic[static_cast<std::size_t>(i)] = nv_ + i;
    basis_.state[static_cast<std::size_t>(nv_ + i)] = VarState::Basic;
  }
  binv_ = Eigen::MatrixXd::Identity(m_, m_) * -1.0;
  binv_valid_ = true;
}

void DenseSimplex::set_basis(Basis basis) {
  if (basis.basic.size() != static_cast<std::size_t>(m_) ||
      basis.state.size() != static_cast<std::size_t>(nv_ + m_)) {
    reset_basis();
    return;
  }
  const bool same = basis.basic == basis_.basic;
  basis_ = std::move(basis);
  if (!same) binv_valid_ = false;
}

void DenseSimplex::load_bounds(std::span<const double> lower, std::span<const double> upper) {
  for (int j = 0; j < nv_; ++j) {
    lo_[static_cast<std::size_t>(j)] = lower[static_cast<std::size_t>(j)];
    up_[static_cast<std::size_t>(j)] = upper[static_cast<std::size_t>(j)];
  }
}

void DenseSimplex::place_nonbasic() {
  std::fill(pos_.begin(), pos_.end(), -1);
  for (int k = 0; k < m_; ++k) pos_[static_cast<std::size_t>(basis_.basic[static_cast<std::size_t>(k)])] = k;
  for (int j = 0; j < nv_ + m_; ++j) {
    const auto u = static_cast<std::size_t>(j);
    if (pos_[u] >= 0) {
      basis_.state[u] = VarState::Basic;
      continue;
    }
    VarState& s = basis_.state[u];
    if (s == VarState::Basic) s = VarState::AtLower;
    if (s == VarState::AtLower && !std::isfinite(lo_[u])) s = VarState::AtUpper;
    if (s == VarState::AtUpper && !std::isfinite(up_[u])) s = VarState::AtLower;
    x_[u] = s == VarState::AtLower ? lo_[u] : up_[u];
    if (!std::isfinite(x_[u])) x_[u] = 0.0;
  }
}

bool DenseSimplex::refactor() {
  if (m_ == 0) {
    binv_valid_ = true;
    return true;
  }
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(m_, m_);
  for (int k = 0; k < m_; ++k) {
    for (const Entry& e : cols_[static_cast<std::size_t>(basis_.basic[static_cast<std::size_t>(k)])]) {
      b(e.row, k) = e.value;
    }
  }
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(b);
  if (!(lu.rcond() > 1e-14)) {
    binv_valid_ = false;
    return false;
  }
  binv_ = lu.inverse();
  binv_valid_ = true;
  return true;
}

void DenseSimplex::compute_basic_values() {
  if (m_ == 0) return;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m_);
  for (int j = 0; j < nv_ + m_; ++j) {
    if (pos_[static_cast<std::size_t>(j)] >= 0) continue;
    const double v = x_[static_cast<std::size_t>(j)];
    if (v == 0.0) continue;
    for (const Entry& e : cols_[static_cast<std::size_t>(j)]) rhs(e.row) -= e.value * v;
  }
  const Eigen::VectorXd xb = binv_ * rhs;
  for (int k = 0; k < m_; ++k) x_[static_cast<std::size_t>(basis_.basic[static_cast<std::size_t>(k)])] = xb(k);
}

double DenseSimplex::column_dot(int j, const Eigen::VectorXd& y) const {
  double s = 0.0;
  for (const Entry& e : cols_[static_cast<std::size_t>(j)]) s += e.value * y(e.row);
  return s;
}

void DenseSimplex::column_times_inverse(int j, Eigen::VectorXd& out) const {
  out.setZero();
  for (const Entry& e : cols_[static_cast<std::size_t>(j)]) out.noalias() += e.value * binv_.col(e.row);
}

double DenseSimplex::tol_for(double bound) const {
  return opt_.primal_tol * std::max(1.0, std::isfinite(bound) ? std::abs(bound) : 1.0);
}

double DenseSimplex::infeasibility(int j) const {
  const auto u = static_cast<std::size_t>(j);
  if (x_[u] < lo_[u] - tol_for(lo_[u])) return lo_[u] - x_[u];
  if (x_[u] > up_[u] + tol_for(up_[u])) return x_[u] - up_[u];
  return 0.0;
}

LpResult DenseSimplex::solve(std::span<const double> lower, std::span<const double> upper,
                             long iteration_limit) {
  const int total = nv_ + m_;
  if (iteration_limit < 0) iteration_limit = 50L * (total + m_) + 10000;
  load_bounds(lower, upper);
  place_nonbasic();
  if (!binv_valid_ && !refactor()) {
    reset_basis();
    place_nonbasic();
  }
  compute_basic_values();

  LpResult result;
  Eigen::VectorXd cb(m_), y(m_), alpha(m_), pivot_row(m_);
  long degenerate = 0;
  int since_refactor = 0;
  const long bland_threshold = static_cast<long>(opt_.bland_factor) * std::max(nv_, 1);

  for (;;) {
    if (since_refactor >= opt_.refactor_interval) {
      if (!refactor()) {
        reset_basis();
        place_nonbasic();
      }
      compute_basic_values();
      since_refactor = 0;
    }

    bool phase1 = false;
    for (int k = 0; k < m_; ++k) {
      const int j = basis_.basic[static_cast<std::size_t>(k)];
      const auto u = static_cast<std::size_t>(j);
      if (x_[u] < lo_[u] - tol_for(lo_[u])) {
        cb(k) = -1.0;
        phase1 = true;
      } else if (x_[u] > up_[u] + tol_for(up_[u])) {
        cb(k) = 1.0;
        phase1 = true;
      } else {
        cb(k) = 0.0;
      }
    }
    if (!phase1) {
      for (int k = 0; k < m_; ++k) cb(k) = cost_[static_cast<std::size_t>(basis_.basic[static_cast<std::size_t>(k)])];
    }
    if (m_ > 0) y.noalias() = binv_.transpose() * cb;

    const bool bland = degenerate > bland_threshold;
    int entering = -1;
    double entering_dir = 0.0;
    double best_score = 0.0;
    for (int j = 0; j < total; ++j) {
      const auto u = static_cast<std::size_t>(j);
      if (pos_[u] >= 0 || !(up_[u] > lo_[u])) continue;
      const double d = (phase1 ? 0.0 : cost_[u]) - (m_ > 0 ? column_dot(j, y) : 0.0);
      double dir = 0.0;
      if (basis_.state[u] == VarState::AtLower && d < -opt_.dual_tol) dir = 1.0;
      else if (basis_.state[u] == VarState::AtUpper && d > opt_.dual_tol) dir = -1.0;
      if (dir == 0.0) continue;
      if (bland) {
        entering = j;
        entering_dir = dir;
        break;
      }
      if (std::abs(d) > best_score) {
        best_score = std::abs(d);
        entering = j;
        entering_dir = dir;
      }
    }

    if (entering < 0) {
      if (since_refactor > 0) {
        // Confirm with a fresh factorization before concluding.
        if (!refactor()) {
          reset_basis();
          place_nonbasic();
        }
        compute_basic_values();
        since_refactor = 0;
        continue;
      }
      result.status = phase1 ? LpStatus::Infeasible : LpStatus::Optimal;
      break;
    }

    if (m_ > 0) column_times_inverse(entering, alpha);
    const auto ue = static_cast<std::size_t>(entering);
    const double own_range = up_[ue] - lo_[ue];

    int leave_k = -1;
    double leave_t = kInf;
    double leave_mag = 0.0;
    bool leave_upper = false;
    for (int k = 0; k < m_; ++k) {
      const double dk = -entering_dir * alpha(k);
      if (std::abs(dk) <= opt_.pivot_tol) continue;
      const int j = basis_.basic[static_cast<std::size_t>(k)];
      const auto u = static_cast<std::size_t>(j);
      const double v = x_[u];
      double t = kInf;
      bool to_upper = false;
      if (phase1 && v < lo_[u] - tol_for(lo_[u])) {
        if (dk <= 0.0) continue;
        t = (lo_[u] - v) / dk;
      } else if (phase1 && v > up_[u] + tol_for(up_[u])) {
        if (dk >= 0.0) continue;
        t = (v - up_[u]) / -dk;
        to_upper = true;
      } else if (dk < 0.0) {
        if (!std::isfinite(lo_[u])) continue;
        t = std::max(0.0, v - lo_[u]) / -dk;
      } else {
        if (!std::isfinite(up_[u])) continue;
        t = std::max(0.0, up_[u] - v) / dk;
        to_upper = true;
      }
      bool take = false;
      if (t < leave_t - 1e-12) {
        take = true;
      } else if (t <= leave_t + 1e-12) {
        take = bland ? j < basis_.basic[static_cast<std::size_t>(leave_k)] : std::abs(dk) > leave_mag;
      }
      if (take) {
        leave_k = k;
        leave_t = t;
        leave_mag = std::abs(dk);
        leave_upper = to_upper;
      }
    }

    if (leave_k < 0 && !std::isfinite(own_range)) {
      result.status = LpStatus::Unbounded;
      break;
    }

    const bool flip = own_range <= leave_t;
    const double t = flip ? own_range : leave_t;
    x_[ue] += entering_dir * t;
    for (int k = 0; k < m_; ++k) {
      x_[static_cast<std::size_t>(basis_.basic[static_cast<std::size_t>(k)])] += -entering_dir * alpha(k) * t;
    }
    if (flip) {
      basis_.state[ue] = entering_dir > 0 ? VarState::AtUpper : VarState::AtLower;
      x_[ue] = entering_dir > 0 ? up_[ue] : lo_[ue];
    } else {
      const int leaving = basis_.basic[static_cast<std::size_t>(leave_k)];
      const auto ul = static_cast<std::size_t>(leaving);
      x_[ul] = leave_upper ? up_[ul] : lo_[ul];
      basis_.state[ul] = leave_upper ? VarState::AtUpper : VarState::AtLower;
      pos_[ul] = -1;
      basis_.basic[static_cast<std::size_t>(leave_k)] = entering;
      pos_[ue] = leave_k;
      basis_.state[ue] = VarState::Basic;

      const double piv = alpha(leave_k);
      pivot_row = binv_.row(leave_k).transpose() / piv;
      alpha(leave_k) = 0.0;
      binv_.noalias() -= alpha * pivot_row.transpose();
      binv_.row(leave_k) = pivot_row.transpose();
    }

    degenerate = t <= 1e-12 ? degenerate + 1 : 0;
    ++result.iterations;
    ++since_refactor;
    if (result.iterations >= iteration_limit) {
      result.status = LpStatus::IterationLimit;
      break;
    }
  }

  result.x.resize(static_cast<std::size_t>(nv_));
  for (int j = 0; j < nv_; ++j) {
    const auto u = static_cast<std::size_t>(j);
    result.x[u] = std::clamp(x_[u], lo_[u], up_[u]);
  }
  if (result.status == LpStatus::Optimal) result.objective = model_->evaluate_objective(result.x);
  return result;
}

}  // namespace netrisk::milp
