#pragma once

#include "vfcoord/branch_and_bound.hpp"
#include "vfcoord/simplex.hpp"
#include "vfcoord/types.hpp"

#include <map>
#include <string>
#include <vector>

namespace vfcoord {

// ---------------------------------------------------------------------------
// Multi-area system data
// ---------------------------------------------------------------------------

struct Unit {
  std::string id;
  std::string bus;
  double p_min = 0.0, p_max = 0.0;       // MW when committed
  double ramp_up = 0.0, ramp_down = 0.0;  // MW per period
  int min_up = 1, min_down = 1;           // periods
  double startup_cost = 0.0;              // $
  double no_load_cost = 0.0;              // $ per committed period
  double marginal_cost = 0.0;             // $/MWh
  bool initial_on = false;
  int initial_hours = 1;  // periods already spent in the initial state
};

struct Bus {
  std::string id;
  std::vector<double> demand;  // MW, one entry per period
};

struct Line {
  std::string id;
  std::string from, to;
  double susceptance = 0.0;  // p.u.
  double rating = 0.0;       // MW
};

struct AreaSystem {
  std::string id;
  std::string reference_bus;
  std::vector<Bus> buses;
  std::vector<Line> lines;
  std::vector<Unit> units;
  std::vector<double> reserve;  // MW per period (empty -> zero)

  const Bus* bus(const std::string& bus_id) const;
};

struct TieEndpoint {
  std::string area, bus;
};

struct TieLine {
  std::string id;
  TieEndpoint from, to;             // oriented: flow > 0 moves from->to
  std::vector<double> z_min, z_max;  // MW per period
};

struct SystemInstance {
  int periods = 1;
  std::vector<AreaSystem> areas;
  std::vector<TieLine> tielines;

  const AreaSystem* area(const std::string& id) const;
  std::vector<const TieLine*> ties_touching(const std::string& area_id) const;
  std::vector<std::string> boundary_buses(const std::string& area_id) const;
};

// ---------------------------------------------------------------------------
// Diagnostics
// ---------------------------------------------------------------------------

enum class Severity { Error, Warning };

struct Diagnostic {
  Severity severity;
  std::string code;     // stable identifier, e.g. "tie.bounds"
  std::string entity;   // offending object id
  std::string message;

  bool is_error() const { return severity == Severity::Error; }
};

std::vector<Diagnostic> validate_instance(const SystemInstance& sys);

// ---------------------------------------------------------------------------
// Standard-form MILP with a parameterized right-hand side
// ---------------------------------------------------------------------------

struct Box {
  Vec lo, hi;
  Index size() const { return lo.size(); }
  bool contains(const Vec& z, double tol = 1e-9) const;
  Vec clamp(const Vec& z) const;
};

enum class RowKind {
  Balance, PMin, PMax, StartLink, MinUp, MinDown, ForcedState,
  RampUp, RampDown, FlowDef, FlowUpper, FlowLower, Reserve,
  TieUpper, TieLower, Consensus, Other
};

struct RowMeta {
  RowKind kind = RowKind::Other;
  std::string area, entity;  // entity: bus / unit / line / tie id
  int period = 0;
};

enum class BinKind { Status, Startup };

struct BinMeta {
  BinKind kind = BinKind::Status;
  std::string area, unit;
  int period = 0;
};

/// rhs entry that varies with a tie-line injection: rhs[row] = base[row] + sign * z.
struct ParamEntry {
  Index row = -1;
  std::string tie;
  int period = 0;
  double sign = 1.0;
  double lo = 0.0, hi = 0.0;  // bounds of the oriented tie flow
};

/// Column pair of a split tie-flow variable in the centralized model.
struct TieColRef {
  std::string tie, area;
  int period = 0;
  Index col_pos = -1, col_neg = -1;  // continuous-block indices, z = pos - neg
};

/// min cI'x + cC'y  s.t.  A_I x + A_C y = rhs(z),  x in {0,1}^m,  y >= 0.
struct StandardMilp {
  Vec c_bin, c_cont;
  Mat A_bin, A_cont;
  Vec rhs_base;
  std::vector<ParamEntry> params;

  std::vector<BinMeta> bin_meta;
  std::vector<std::string> cont_names;
  std::vector<RowMeta> row_meta;
  /// startup_col value is implied: 1 iff status(col) turns on w.r.t. prev/initial
  struct ImpliedStartup {
    Index startup_col = -1, status_col = -1, prev_status_col = -1;  // prev -1 -> initial
    bool initial_on = false;
  };
  std::vector<ImpliedStartup> implied_startups;
  std::vector<TieColRef> tie_cols;  // centralized model only

  Index num_binaries() const { return c_bin.size(); }
  Index num_cont() const { return c_cont.size(); }
  Index num_rows() const { return rhs_base.size(); }

  /// Full right-hand side at parameter vector z (z.size() == params.size()).
  Vec rhs(const Vec& z) const;
  Box domain() const;
  /// Startup columns filled in from status columns; x must hold the status bits.
  void apply_implied(IntVec& x) const;
};

/// Compiles one area's SCUC into standard form. Tie-line injections touching
/// the area become rhs parameters on the boundary-bus balance rows.
StandardMilp build_area_milp(const SystemInstance& sys, const std::string& area_id);

/// Joint model over all areas: per-area blocks, split tie-flow columns with
/// one copy per endpoint area, and per-period consensus rows tying the copies.
StandardMilp build_centralized_milp(const SystemInstance& sys);

// ---------------------------------------------------------------------------
// Solver bridges
// ---------------------------------------------------------------------------

MilpProblem to_milp_problem(const StandardMilp& m, const Vec& rhs);

MilpSolution solve_milp(const StandardMilp& m, const Vec& rhs, const SolverConfig& cfg = {});

/// LP over y with A_I x moved to the rhs; reported objective includes cI'x.
LpSolution solve_lp_fixed_binaries(const StandardMilp& m, const IntVec& x, const Vec& rhs,
                                   const SolverConfig& cfg = {});

}  // namespace vfcoord
