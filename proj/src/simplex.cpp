#include "vfcoord/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace vfcoord {

const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::Optimal: return "Optimal";
    case LpStatus::Infeasible: return "Infeasible";
    case LpStatus::Unbounded: return "Unbounded";
    case LpStatus::NumericalFailure: return "NumericalFailure";
    case LpStatus::IterationLimit: return "IterationLimit";
  }
  return "?";
}

namespace {

enum VarState : char { kBasic, kAtLower, kAtUpper, kFreeZero };

class Simplex {
 public:
  Simplex(const Mat& A, const Vec& b, const Vec& c, const Vec& lo, const Vec& up,
          const SolverConfig& cfg)
      : cfg_(cfg), r_(A.rows()), n_(A.cols()), ncols_(n_ + r_) {
    if (b.size() != r_ || c.size() != n_ || lo.size() != n_ || up.size() != n_)
      throw std::invalid_argument("solve_lp: dimension mismatch");
    if (r_ > cfg.max_rows) throw std::invalid_argument("solve_lp: row cap exceeded");
    if (!A.allFinite() || !b.allFinite() || !c.allFinite())
      throw std::invalid_argument("solve_lp: non-finite input");

    A_.resize(r_, ncols_);
    A_.leftCols(n_) = A;
    A_.rightCols(r_).setZero();
    b_ = b;
    lo_.resize(ncols_);
    up_.resize(ncols_);
    lo_.head(n_) = lo;
    up_.head(n_) = up;
    cost_.setZero(ncols_);
    cost_.head(n_) = c;
    x_.setZero(ncols_);
    state_.assign(static_cast<size_t>(ncols_), kAtLower);
    basic_.resize(static_cast<size_t>(r_));
    max_iters_ = cfg.max_lp_iterations > 0 ? cfg.max_lp_iterations : 200 * (r_ + ncols_) + 20000;
  }

  LpSolution run() {
    LpSolution out;
    // Nonbasic starting point: finite bound nearest zero, or zero for free columns.
    for (Index j = 0; j < n_; ++j) {
      const bool lf = std::isfinite(lo_[j]), uf = std::isfinite(up_[j]);
      if (lf && uf) {
        if (std::abs(lo_[j]) <= std::abs(up_[j])) { x_[j] = lo_[j]; state_[j] = kAtLower; }
        else { x_[j] = up_[j]; state_[j] = kAtUpper; }
      } else if (lf) { x_[j] = lo_[j]; state_[j] = kAtLower; }
      else if (uf) { x_[j] = up_[j]; state_[j] = kAtUpper; }
      else { x_[j] = 0.0; state_[j] = kFreeZero; }
    }
    // Artificial columns close the residual and form the starting basis.
    Vec resid = b_ - A_.leftCols(n_) * x_.head(n_);
    for (Index i = 0; i < r_; ++i) {
      const Index j = n_ + i;
      A_(i, j) = resid[i] >= 0.0 ? 1.0 : -1.0;
      lo_[j] = 0.0;
      up_[j] = kInf;
      x_[j] = std::abs(resid[i]);
      basic_[static_cast<size_t>(i)] = j;
      state_[static_cast<size_t>(j)] = kBasic;
    }
    binv_ = Mat::Identity(r_, r_);
    for (Index i = 0; i < r_; ++i) binv_(i, i) = A_(i, n_ + i);  // diag(+-1)^-1 = itself

    // Phase 1: drive sum of artificials to zero.
    phase1_ = true;
    obj_.setZero(ncols_);
    obj_.segment(n_, r_).setOnes();
    LpStatus st = iterate();
    if (st != LpStatus::Optimal) return finish(out, st);
    const double infeas = x_.segment(n_, r_).sum();
    if (infeas > cfg_.feas_tol * (1.0 + b_.cwiseAbs().maxCoeff())) {
      out.status = LpStatus::Infeasible;
      out.iterations = iters_;
      return out;
    }
    expel_artificials();
    for (Index i = 0; i < r_; ++i) up_[n_ + i] = 0.0;  // pin the ones that must stay

    // Phase 2: original objective.
    phase1_ = false;
    obj_ = cost_;
    st = iterate();
    return finish(out, st);
  }

  std::string dump() const {
    std::ostringstream os;
    os << "basis rows=" << r_ << " cols=" << n_ << "\n";
    for (Index i = 0; i < r_; ++i) {
      const Index j = basic_[static_cast<size_t>(i)];
      os << "row " << i << ": col " << (j < n_ ? j : -(j - n_) - 1) << " = " << x_[j] << "\n";
    }
    return os.str();
  }

 private:
  LpSolution finish(LpSolution& out, LpStatus st) {
    refactor();
    out.status = st;
    out.iterations = iters_;
    out.x = x_.head(n_);
    out.objective = cost_.head(n_).dot(out.x);
    Vec cb(r_);
    for (Index i = 0; i < r_; ++i) cb[i] = cost_[basic_[static_cast<size_t>(i)]];
    out.duals = binv_.transpose() * cb;
    out.reduced_costs = cost_.head(n_) - A_.leftCols(n_).transpose() * out.duals;
    if (st == LpStatus::NumericalFailure && out.note.empty()) out.note = note_;
    if (st == LpStatus::IterationLimit) out.note = "simplex iteration limit";
    return out;
  }

  void refactor() {
    Mat B(r_, r_);
    for (Index i = 0; i < r_; ++i) B.col(i) = A_.col(basic_[static_cast<size_t>(i)]);
    Eigen::PartialPivLU<Mat> lu(B);
    binv_ = lu.inverse();
    // Recompute basic values from the nonbasic point.
    Vec rhs = b_;
    for (Index j = 0; j < ncols_; ++j)
      if (state_[static_cast<size_t>(j)] != kBasic && x_[j] != 0.0) rhs -= A_.col(j) * x_[j];
    Vec xb = binv_ * rhs;
    for (Index i = 0; i < r_; ++i) x_[basic_[static_cast<size_t>(i)]] = xb[i];
  }

  // Degenerate pivots that swap leftover artificials for original columns.
  // Rows where no pivot exists are redundant; their artificial stays basic at 0.
  void expel_artificials() {
    for (Index i = 0; i < r_; ++i) {
      const Index bj = basic_[static_cast<size_t>(i)];
      if (bj < n_) continue;
      Index enter = -1;
      double best = 0.0;
      for (Index j = 0; j < n_; ++j) {
        if (state_[static_cast<size_t>(j)] == kBasic) continue;
        if (lo_[j] == up_[j]) continue;  // fixed, useless as a basic column
        const double alpha = binv_.row(i).dot(A_.col(j));
        if (std::abs(alpha) > std::abs(best)) { best = alpha; enter = j; }
      }
      if (enter < 0 || std::abs(best) < 1e-7) continue;
      Vec w = binv_ * A_.col(enter);
      state_[static_cast<size_t>(bj)] = kAtLower;
      x_[bj] = 0.0;
      const double keep = x_[enter];
      pivot(i, enter, w);
      x_[enter] = keep;  // zero-length step: value is unchanged
    }
  }

  LpStatus iterate() {
    degen_streak_ = 0;
    bland_ = false;
    int rejected = 0;
    for (;;) {
      if (++iters_ > max_iters_) return LpStatus::IterationLimit;
      if (pivots_since_refactor_ >= cfg_.refactor_every) {
        refactor();
        pivots_since_refactor_ = 0;
      }
      Vec cb(r_);
      for (Index i = 0; i < r_; ++i) cb[i] = obj_[basic_[static_cast<size_t>(i)]];
      const Vec nu = binv_.transpose() * cb;

      // Pricing.
      Index enter = -1;
      int dir = 0;
      double best_viol = cfg_.dual_tol;
      for (Index j = 0; j < ncols_; ++j) {
        const char st = state_[static_cast<size_t>(j)];
        if (st == kBasic) continue;
        if (lo_[j] == up_[j]) continue;
        const double d = obj_[j] - nu.dot(A_.col(j));
        double viol = 0.0;
        int t = 0;
        if (st == kAtLower && d < -cfg_.dual_tol) { viol = -d; t = +1; }
        else if (st == kAtUpper && d > cfg_.dual_tol) { viol = d; t = -1; }
        else if (st == kFreeZero && std::abs(d) > cfg_.dual_tol) { viol = std::abs(d); t = d < 0 ? +1 : -1; }
        if (t == 0) continue;
        if (bland_) { enter = j; dir = t; break; }  // lowest index
        if (viol > best_viol) { best_viol = viol; enter = j; dir = t; }
      }
      if (enter < 0) return LpStatus::Optimal;

      const Vec w = binv_ * A_.col(enter);

      // Ratio test; the entering column moves by delta >= 0 in direction dir.
      const double flip_span = (std::isfinite(lo_[enter]) && std::isfinite(up_[enter]))
                                   ? up_[enter] - lo_[enter]
                                   : kInf;
      auto row_limit = [&](Index i) -> double {
        const double eff = dir * w[i];
        if (std::abs(eff) <= cfg_.pivot_tol) return kInf;
        const Index bj = basic_[static_cast<size_t>(i)];
        double lim;
        if (eff > 0.0) {
          if (!std::isfinite(lo_[bj])) return kInf;
          lim = (x_[bj] - lo_[bj]) / eff;
        } else {
          if (!std::isfinite(up_[bj])) return kInf;
          lim = (x_[bj] - up_[bj]) / eff;
        }
        return lim < 0.0 ? 0.0 : lim;
      };
      double min_ratio = kInf;
      for (Index i = 0; i < r_; ++i) min_ratio = std::min(min_ratio, row_limit(i));

      if (!std::isfinite(min_ratio) && !std::isfinite(flip_span)) {
        if (phase1_) { note_ = "unbounded phase-1 ray"; return LpStatus::NumericalFailure; }
        return LpStatus::Unbounded;
      }

      Index leave_row = -1;  // stays -1 on a bound flip
      double delta;
      if (flip_span <= min_ratio) {
        delta = flip_span;
      } else {
        delta = min_ratio;
        // Among the blocking rows pick the pivot: Bland -> lowest basic index,
        // otherwise largest magnitude (ties by lowest basic index).
        for (Index i = 0; i < r_; ++i) {
          if (row_limit(i) > min_ratio + 1e-9) continue;
          if (leave_row < 0) { leave_row = i; continue; }
          const Index bi = basic_[static_cast<size_t>(i)];
          const Index bl = basic_[static_cast<size_t>(leave_row)];
          if (bland_) {
            if (bi < bl) leave_row = i;
          } else if (std::abs(w[i]) > std::abs(w[leave_row]) + 1e-15 ||
                     (std::abs(w[i]) >= std::abs(w[leave_row]) - 1e-15 && bi < bl)) {
            leave_row = i;
          }
        }
        if (std::abs(w[leave_row]) < cfg_.pivot_tol) {
          if (++rejected > 16) { note_ = "repeated tiny pivots"; return LpStatus::NumericalFailure; }
          refactor();
          pivots_since_refactor_ = 0;
          continue;
        }
      }
      rejected = 0;

      if (delta < 1e-9) {
        if (++degen_streak_ > 3 * r_) bland_ = true;
      } else {
        degen_streak_ = 0;
      }

      // Apply the step.
      if (delta != 0.0) {
        for (Index i = 0; i < r_; ++i) x_[basic_[static_cast<size_t>(i)]] -= dir * delta * w[i];
        x_[enter] += dir * delta;
      }
      if (leave_row < 0) {
        // Bound flip: the entering variable traverses to its other bound.
        state_[static_cast<size_t>(enter)] = dir > 0 ? kAtUpper : kAtLower;
        x_[enter] = dir > 0 ? up_[enter] : lo_[enter];
      } else {
        const Index out_col = basic_[static_cast<size_t>(leave_row)];
        state_[static_cast<size_t>(out_col)] = dir * w[leave_row] > 0 ? kAtLower : kAtUpper;
        x_[out_col] = state_[static_cast<size_t>(out_col)] == kAtLower ? lo_[out_col] : up_[out_col];
        pivot(leave_row, enter, w);
      }
    }
  }

  void pivot(Index row, Index enter, const Vec& w) {
    const double piv = w[row];
    binv_.row(row) /= piv;
    for (Index i = 0; i < r_; ++i) {
      if (i == row) continue;
      if (w[i] != 0.0) binv_.row(i) -= w[i] * binv_.row(row);
    }
    state_[static_cast<size_t>(enter)] = kBasic;
    basic_[static_cast<size_t>(row)] = enter;
    ++pivots_since_refactor_;
  }

  const SolverConfig cfg_;
  Index r_, n_, ncols_;
  Mat A_;
  Vec b_, lo_, up_, cost_, obj_, x_;
  std::vector<char> state_;
  std::vector<Index> basic_;
  Mat binv_;
  long iters_ = 0, max_iters_ = 0, degen_streak_ = 0;
  int pivots_since_refactor_ = 0;
  bool bland_ = false, phase1_ = false;
  std::string note_;
};

}  // namespace

LpSolution solve_lp(const Mat& A, const Vec& b, const Vec& c, const Vec& lo, const Vec& up,
                    const SolverConfig& cfg) {
  Simplex s(A, b, c, lo, up, cfg);
  return s.run();
}

LpSolution solve_lp_nonneg(const Mat& A, const Vec& b, const Vec& c, const SolverConfig& cfg) {
  return solve_lp(A, b, c, Vec::Zero(A.cols()), Vec::Constant(A.cols(), kInf), cfg);
}

std::string dump_basis(const Mat& A, const Vec& b, const Vec& c, const Vec& lo, const Vec& up,
                       const SolverConfig& cfg) {
  Simplex s(A, b, c, lo, up, cfg);
  LpSolution sol = s.run();
  return std::string("status ") + to_string(sol.status) + "\n" + s.dump();
}

}  // namespace vfcoord
