#include "vfcoord/branch_and_bound.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <vector>

namespace vfcoord {

const char* to_string(MilpStatus s) {
  switch (s) {
    case MilpStatus::Optimal: return "Optimal";
    case MilpStatus::Infeasible: return "Infeasible";
    case MilpStatus::Unbounded: return "Unbounded";
    case MilpStatus::Incomplete: return "Incomplete";
  }
  return "?";
}

namespace {

struct Node {
  double bound;  // parent LP objective, a valid lower bound
  long id;
  std::vector<std::pair<Index, char>> fixes;  // (column, 0/1)
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;  // min-heap on bound
    return a.id > b.id;
  }
};

}  // namespace

MilpSolution solve_milp_problem(const MilpProblem& p, const SolverConfig& cfg) {
  const Index n = p.A.cols();
  if (static_cast<Index>(p.binary_cols.size()) > cfg.max_binaries)
    throw std::invalid_argument("solve_milp: binary cap exceeded");
  for (Index j : p.binary_cols) {
    if (j < 0 || j >= n) throw std::invalid_argument("solve_milp: binary column out of range");
    if (p.lo[j] < -1e-9 || p.up[j] > 1.0 + 1e-9)
      throw std::invalid_argument("solve_milp: binary column bounds must lie in [0,1]");
  }

  MilpSolution out;
  std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
  long next_id = 0;
  open.push(Node{-kInf, next_id++, {}});

  Vec incumbent;
  double inc_obj = kInf;
  const auto prune_eps = [&] { return cfg.gap_abs_guard * (1.0 + std::abs(inc_obj)); };

  auto solve_node = [&](const std::vector<std::pair<Index, char>>& fixes) {
    Vec lo = p.lo, up = p.up;
    for (auto [j, v] : fixes) {
      lo[j] = v;
      up[j] = v;
    }
    LpSolution sol = solve_lp(p.A, p.b, p.c, lo, up, cfg);
    out.lp_iterations += sol.iterations;
    return sol;
  };

  bool hit_limit = false;
  while (!open.empty()) {
    Node node = open.top();
    if (inc_obj < kInf && node.bound >= inc_obj - prune_eps()) break;  // best-first: all pruned
    open.pop();
    if (out.nodes >= cfg.max_nodes) { hit_limit = true; break; }
    ++out.nodes;

    LpSolution rel = solve_node(node.fixes);
    if (rel.status == LpStatus::Infeasible) continue;
    if (rel.status == LpStatus::Unbounded) {
      if (node.id == 0) { out.status = MilpStatus::Unbounded; return out; }
      out.note = "unbounded subproblem below feasible root";
      continue;
    }
    if (rel.status != LpStatus::Optimal)
      throw std::runtime_error(std::string("solve_milp: node LP ") + to_string(rel.status) +
                               (rel.note.empty() ? "" : ": " + rel.note));
    if (inc_obj < kInf && rel.objective >= inc_obj - prune_eps()) continue;

    // Most fractional binary, ties by lowest index.
    Index branch_col = -1;
    double best_score = kInf;
    for (Index j : p.binary_cols) {
      const double frac = std::abs(rel.x[j] - std::round(rel.x[j]));
      if (frac <= cfg.integrality_tol) continue;
      const double score = std::abs(rel.x[j] - 0.5);
      if (score < best_score - 1e-12) { best_score = score; branch_col = j; }
    }

    if (branch_col < 0) {
      // Integral point. Re-solve with binaries pinned so the reported solution
      // is exactly integral.
      std::vector<std::pair<Index, char>> pinned = node.fixes;
      for (Index j : p.binary_cols)
        pinned.emplace_back(j, static_cast<char>(std::lround(rel.x[j])));
      LpSolution fixed = solve_node(pinned);
      const LpSolution& use = fixed.optimal() ? fixed : rel;
      if (use.objective < inc_obj) {
        inc_obj = use.objective;
        incumbent = use.x;
        if (fixed.optimal())
          for (Index j : p.binary_cols) incumbent[j] = std::round(incumbent[j]);
        if (inc_obj <= cfg.objective_target) { hit_limit = true; out.note = "objective target reached"; break; }
      }
      continue;
    }

    std::vector<std::pair<Index, char>> f0 = node.fixes, f1 = node.fixes;
    f0.emplace_back(branch_col, 0);
    f1.emplace_back(branch_col, 1);
    open.push(Node{rel.objective, next_id++, std::move(f0)});
    open.push(Node{rel.objective, next_id++, std::move(f1)});
  }

  double open_bound = kInf;
  if (!open.empty()) open_bound = open.top().bound;
  if (inc_obj < kInf) {
    out.x = incumbent;
    out.objective = inc_obj;
    if (hit_limit) {
      out.status = MilpStatus::Incomplete;
      out.best_bound = std::min(inc_obj, open_bound == -kInf ? inc_obj : open_bound);
      if (out.note.empty()) out.note = "node limit reached";
    } else {
      out.status = MilpStatus::Optimal;
      out.best_bound = std::min(inc_obj, open.empty() ? inc_obj : open_bound);
    }
  } else if (hit_limit) {
    out.status = MilpStatus::Incomplete;
    out.best_bound = open_bound == kInf ? -kInf : open_bound;
    if (out.note.empty()) out.note = "node limit reached";
  } else {
    out.status = MilpStatus::Infeasible;
  }
  return out;
}

}  // namespace vfcoord
