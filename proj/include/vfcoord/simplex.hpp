#pragma once

#include "vfcoord/types.hpp"

#include <string>

namespace vfcoord {

/// All numeric knobs of the LP/MILP engine live here.
struct SolverConfig {
  double feas_tol = 1e-8;         // primal feasibility, per row, relative to 1+|b|_inf
  double dual_tol = 1e-9;         // reduced-cost threshold for entering candidates
  double integrality_tol = 1e-6;  // |x - round(x)| below this counts as integral
  double gap_rel = 0.0;           // proven relative MILP gap target (kept at 0)
  double gap_abs_guard = 1e-9;    // numeric slack used when proving the zero gap
  double pivot_tol = 1e-10;       // pivots smaller than this are rejected
  int refactor_every = 64;        // basis inverse refresh interval (pivots)
  Index max_rows = 5000;
  Index max_binaries = 200;
  long max_lp_iterations = 0;     // 0 -> 200*(rows+cols) + 20000
  long max_nodes = 2000000;
  double objective_target = -kInf;  // stop branch & bound once incumbent <= target
};

enum class LpStatus { Optimal, Infeasible, Unbounded, NumericalFailure, IterationLimit };

const char* to_string(LpStatus s);

struct LpSolution {
  LpStatus status = LpStatus::NumericalFailure;
  Vec x;              // primal point (original columns)
  Vec duals;          // one multiplier per row
  Vec reduced_costs;  // c - A' * duals
  double objective = 0.0;
  long iterations = 0;
  std::string note;  // populated on NumericalFailure / IterationLimit

  bool optimal() const { return status == LpStatus::Optimal; }
};

/// Bounded-variable primal simplex for
///     min c'x   s.t.  A x = b,   lo <= x <= up
/// (two-phase; Bland's rule kicks in after a degenerate streak of 3*rows).
LpSolution solve_lp(const Mat& A, const Vec& b, const Vec& c, const Vec& lo, const Vec& up,
                    const SolverConfig& cfg = {});

/// Same with the default cone bounds x >= 0.
LpSolution solve_lp_nonneg(const Mat& A, const Vec& b, const Vec& c, const SolverConfig& cfg = {});

/// Debug dump of the final basis: one line per row, "row <i>: col <j> = <value>",
/// prefixed by a status header. Documented companion of LpSolution for bug reports.
std::string dump_basis(const Mat& A, const Vec& b, const Vec& c, const Vec& lo, const Vec& up,
                       const SolverConfig& cfg = {});

}  // namespace vfcoord
