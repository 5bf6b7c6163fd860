#pragma once

#include "vfcoord/simplex.hpp"
#include "vfcoord/types.hpp"

#include <string>
#include <vector>

namespace vfcoord {

/// Engine-level MILP: min c'x  s.t.  A x = b, lo <= x <= up,
/// x_j in {0,1} for j in binary_cols (bounds of those columns must sit in [0,1]).
struct MilpProblem {
  Mat A;
  Vec b, c, lo, up;
  std::vector<Index> binary_cols;
};

enum class MilpStatus { Optimal, Infeasible, Unbounded, Incomplete };

const char* to_string(MilpStatus s);

struct MilpSolution {
  MilpStatus status = MilpStatus::Incomplete;
  Vec x;                    // full variable vector; binaries exactly 0/1 at Optimal
  double objective = kInf;  // incumbent value (kInf when none found)
  double best_bound = -kInf;
  long nodes = 0;
  long lp_iterations = 0;
  std::string note;

  bool optimal() const { return status == MilpStatus::Optimal; }
  bool feasible() const { return status == MilpStatus::Optimal || (status == MilpStatus::Incomplete && objective < kInf); }
};

/// Exact branch & bound: best-first node order, branching on the fractional
/// binary closest to 1/2 (ties by lowest column index), zero relative gap.
MilpSolution solve_milp_problem(const MilpProblem& p, const SolverConfig& cfg = {});

}  // namespace vfcoord
