#include "vfcoord/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace vfcoord {

const Bus* AreaSystem::bus(const std::string& bus_id) const {
  for (const auto& b : buses)
    if (b.id == bus_id) return &b;
  return nullptr;
}

const AreaSystem* SystemInstance::area(const std::string& id) const {
  for (const auto& a : areas)
    if (a.id == id) return &a;
  return nullptr;
}

std::vector<const TieLine*> SystemInstance::ties_touching(const std::string& area_id) const {
  std::vector<const TieLine*> out;
  for (const auto& t : tielines)
    if (t.from.area == area_id || t.to.area == area_id) out.push_back(&t);
  return out;
}

std::vector<std::string> SystemInstance::boundary_buses(const std::string& area_id) const {
  std::vector<std::string> out;
  for (const auto& t : tielines) {
    if (t.from.area == area_id) out.push_back(t.from.bus);
    if (t.to.area == area_id) out.push_back(t.to.bus);
  }
  return out;
}

bool Box::contains(const Vec& z, double tol) const {
  if (z.size() != lo.size()) return false;
  for (Index i = 0; i < z.size(); ++i)
    if (z[i] < lo[i] - tol || z[i] > hi[i] + tol) return false;
  return true;
}

Vec Box::clamp(const Vec& z) const {
  Vec out = z;
  for (Index i = 0; i < out.size(); ++i) out[i] = std::min(hi[i], std::max(lo[i], out[i]));
  return out;
}

Vec StandardMilp::rhs(const Vec& z) const {
  if (z.size() != static_cast<Index>(params.size()))
    throw std::invalid_argument("StandardMilp::rhs: parameter vector size mismatch");
  Vec out = rhs_base;
  for (size_t k = 0; k < params.size(); ++k) out[params[k].row] += params[k].sign * z[k];
  return out;
}

Box StandardMilp::domain() const {
  Box b;
  b.lo.resize(static_cast<Index>(params.size()));
  b.hi.resize(static_cast<Index>(params.size()));
  for (size_t k = 0; k < params.size(); ++k) {
    b.lo[static_cast<Index>(k)] = params[k].lo;
    b.hi[static_cast<Index>(k)] = params[k].hi;
  }
  return b;
}

void StandardMilp::apply_implied(IntVec& x) const {
  for (const auto& im : implied_startups) {
    const int prev = im.prev_status_col >= 0 ? x[im.prev_status_col] : (im.initial_on ? 1 : 0);
    x[im.startup_col] = x[im.status_col] > prev ? 1 : 0;
  }
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int a) { return parent[a] == a ? a : parent[a] = find(parent[a]); }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

bool needs_startup_col(const Unit& u) {
  return u.startup_cost > 0.0 || u.min_up > 1 || u.min_down > 1;
}

}  // namespace

std::vector<Diagnostic> validate_instance(const SystemInstance& sys) {
  std::vector<Diagnostic> diag;
  auto err = [&](const std::string& code, const std::string& entity, const std::string& msg) {
    diag.push_back({Severity::Error, code, entity, msg});
  };
  auto warn = [&](const std::string& code, const std::string& entity, const std::string& msg) {
    diag.push_back({Severity::Warning, code, entity, msg});
  };

  const int T = sys.periods;
  if (T < 1) err("system.periods", "system", "periods must be >= 1");
  if (sys.areas.empty()) err("system.areas", "system", "no areas");

  std::set<std::string> area_ids;
  for (const auto& a : sys.areas) {
    if (!area_ids.insert(a.id).second) err("area.duplicate", a.id, "duplicate area id");

    std::set<std::string> bus_ids;
    for (const auto& b : a.buses) {
      if (!bus_ids.insert(b.id).second) err("bus.duplicate", b.id, "duplicate bus id in area " + a.id);
      if (static_cast<int>(b.demand.size()) != T)
        err("bus.demand.size", b.id, "demand series length != periods");
      for (double d : b.demand)
        if (!std::isfinite(d) || d < 0.0) err("bus.demand.value", b.id, "demand must be finite and >= 0");
    }
    if (a.buses.empty()) err("area.buses", a.id, "area has no buses");
    if (!a.bus(a.reference_bus)) err("area.refbus", a.id, "reference bus '" + a.reference_bus + "' not found");

    for (const auto& l : a.lines) {
      if (!a.bus(l.from) || !a.bus(l.to))
        err("line.endpoint", l.id, "line endpoint bus not found in area " + a.id);
      if (l.from == l.to) err("line.loop", l.id, "line connects a bus to itself");
      if (l.susceptance == 0.0) err("line.susceptance", l.id, "degenerate line: zero susceptance");
      if (l.rating <= 0.0) err("line.rating", l.id, "line rating must be positive");
    }

    // Internal connectivity.
    if (!a.buses.empty()) {
      UnionFind uf(a.buses.size());
      auto bus_index = [&](const std::string& id) -> int {
        for (size_t i = 0; i < a.buses.size(); ++i)
          if (a.buses[i].id == id) return static_cast<int>(i);
        return -1;
      };
      for (const auto& l : a.lines) {
        int u = bus_index(l.from), v = bus_index(l.to);
        if (u >= 0 && v >= 0) uf.unite(u, v);
      }
      for (size_t i = 1; i < a.buses.size(); ++i)
        if (uf.find(static_cast<int>(i)) != uf.find(0)) {
          err("area.connectivity", a.id, "internal network is not connected");
          break;
        }
    }

    std::set<std::string> unit_ids;
    for (const auto& u : a.units) {
      if (!unit_ids.insert(u.id).second) err("unit.duplicate", u.id, "duplicate unit id in area " + a.id);
      if (!a.bus(u.bus)) err("unit.bus", u.id, "unit placed at unknown bus '" + u.bus + "'");
      if (u.p_min < 0.0 || u.p_min > u.p_max) err("unit.power", u.id, "requires 0 <= p_min <= p_max");
      if (u.ramp_up <= 0.0 || u.ramp_down <= 0.0) err("unit.ramp", u.id, "ramp limits must be positive");
      if (u.min_up < 1 || u.min_down < 1) err("unit.minupdown", u.id, "min_up and min_down must be >= 1");
      if (u.initial_hours < 1) warn("unit.initial", u.id, "initial_hours < 1; treated as a fresh state change");
    }

    if (!a.reserve.empty() && static_cast<int>(a.reserve.size()) != T)
      err("area.reserve.size", a.id, "reserve series length != periods");
    for (double r : a.reserve)
      if (!std::isfinite(r) || r < 0.0) err("area.reserve.value", a.id, "reserve must be finite and >= 0");
  }

  std::set<std::string> tie_ids;
  std::set<std::pair<std::string, std::string>> tie_buses;
  for (const auto& t : sys.tielines) {
    if (!tie_ids.insert(t.id).second) err("tie.duplicate", t.id, "duplicate tie-line id");
    const AreaSystem* fa = sys.area(t.from.area);
    const AreaSystem* ta = sys.area(t.to.area);
    if (!fa) err("tie.endpoint", t.id, "dangling endpoint: unknown area '" + t.from.area + "'");
    if (!ta) err("tie.endpoint", t.id, "dangling endpoint: unknown area '" + t.to.area + "'");
    if (fa && !fa->bus(t.from.bus)) err("tie.endpoint", t.id, "boundary bus '" + t.from.bus + "' not in area " + t.from.area);
    if (ta && !ta->bus(t.to.bus)) err("tie.endpoint", t.id, "boundary bus '" + t.to.bus + "' not in area " + t.to.area);
    if (t.from.area == t.to.area) err("tie.areas", t.id, "tie-line endpoints must lie in distinct areas");
    if (static_cast<int>(t.z_min.size()) != T || static_cast<int>(t.z_max.size()) != T)
      err("tie.bounds.size", t.id, "z_min/z_max series length != periods");
    for (int k = 0; k < std::min<int>(T, static_cast<int>(std::min(t.z_min.size(), t.z_max.size()))); ++k)
      if (t.z_min[k] > t.z_max[k]) err("tie.bounds", t.id, "z_min > z_max at period " + std::to_string(k + 1));
    for (const auto* ep : {&t.from, &t.to})
      if (!tie_buses.insert({ep->area, ep->bus}).second)
        err("tie.shared_bus", t.id,
            "bus '" + ep->bus + "' in area " + ep->area + " is used by more than one tie-line");
  }

  // Capacity screen: demand beyond local capacity plus import bound.
  for (const auto& a : sys.areas) {
    double cap = 0.0;
    for (const auto& u : a.units) cap += u.p_max;
    double import_bound = 0.0;
    for (const auto& t : sys.tielines) {
      if (static_cast<int>(t.z_min.size()) != T || static_cast<int>(t.z_max.size()) != T) continue;
      for (int k = 0; k < T; ++k) {
        // Import into the from-side is -z, into the to-side +z.
        double imp = 0.0;
        if (t.from.area == a.id) imp = std::max(0.0, -t.z_min[k]);
        else if (t.to.area == a.id) imp = std::max(0.0, t.z_max[k]);
        import_bound = std::max(import_bound, imp);
      }
      // summed over ties below
    }
    double tie_import_total = 0.0;
    for (const auto& t : sys.tielines) {
      if (static_cast<int>(t.z_min.size()) != T || static_cast<int>(t.z_max.size()) != T) continue;
      double best = 0.0;
      for (int k = 0; k < T; ++k) {
        if (t.from.area == a.id) best = std::max(best, -t.z_min[k]);
        else if (t.to.area == a.id) best = std::max(best, t.z_max[k]);
      }
      tie_import_total += best;
    }
    for (int k = 0; k < T; ++k) {
      double load = 0.0;
      for (const auto& b : a.buses)
        if (static_cast<int>(b.demand.size()) == T) load += b.demand[k];
      if (load > cap + tie_import_total + 1e-9)
        warn("area.capacity", a.id,
             "period " + std::to_string(k + 1) + " demand " + std::to_string(load) +
                 " MW exceeds capacity plus import bound; likely infeasible");
    }
  }

  return diag;
}

// ---------------------------------------------------------------------------
// Standard-form builder
// ---------------------------------------------------------------------------

namespace {

struct Trip {
  Index row, col;
  double v;
};

class StandardFormBuilder {
 public:
  Index add_binary(double cost, BinMeta meta) {
    c_bin_.push_back(cost);
    bin_meta_.push_back(std::move(meta));
    return static_cast<Index>(c_bin_.size()) - 1;
  }

  Index add_cont(double cost, std::string name) {
    c_cont_.push_back(cost);
    cont_names_.push_back(std::move(name));
    return static_cast<Index>(c_cont_.size()) - 1;
  }

  Index eq_row(double rhs, RowMeta meta) {
    rhs_.push_back(rhs);
    row_meta_.push_back(std::move(meta));
    return static_cast<Index>(rhs_.size()) - 1;
  }

  Index le_row(double rhs, RowMeta meta) {
    const Index r = eq_row(rhs, std::move(meta));
    cont(r, add_cont(0.0, "slack.r" + std::to_string(r)), 1.0);
    return r;
  }

  Index ge_row(double rhs, RowMeta meta) {
    const Index r = eq_row(rhs, std::move(meta));
    cont(r, add_cont(0.0, "surplus.r" + std::to_string(r)), -1.0);
    return r;
  }

  void bin(Index row, Index col, double v) { bin_trips_.push_back({row, col, v}); }
  void cont(Index row, Index col, double v) { cont_trips_.push_back({row, col, v}); }

  void add_param(ParamEntry p) { params_.push_back(std::move(p)); }
  void add_implied(StandardMilp::ImpliedStartup s) { implied_.push_back(s); }
  void add_tie_col(TieColRef t) { tie_cols_.push_back(std::move(t)); }

  StandardMilp build() const {
    StandardMilp m;
    const Index r = static_cast<Index>(rhs_.size());
    const Index nb = static_cast<Index>(c_bin_.size());
    const Index nc = static_cast<Index>(c_cont_.size());
    m.c_bin = Eigen::Map<const Vec>(c_bin_.data(), nb);
    m.c_cont = Eigen::Map<const Vec>(c_cont_.data(), nc);
    m.rhs_base = Eigen::Map<const Vec>(rhs_.data(), r);
    m.A_bin = Mat::Zero(r, nb);
    m.A_cont = Mat::Zero(r, nc);
    for (const auto& t : bin_trips_) m.A_bin(t.row, t.col) += t.v;
    for (const auto& t : cont_trips_) m.A_cont(t.row, t.col) += t.v;
    m.params = params_;
    m.bin_meta = bin_meta_;
    m.cont_names = cont_names_;
    m.row_meta = row_meta_;
    m.implied_startups = implied_;
    m.tie_cols = tie_cols_;
    return m;
  }

 private:
  std::vector<double> c_bin_, c_cont_, rhs_;
  std::vector<Trip> bin_trips_, cont_trips_;
  std::vector<BinMeta> bin_meta_;
  std::vector<std::string> cont_names_;
  std::vector<RowMeta> row_meta_;
  std::vector<ParamEntry> params_;
  std::vector<StandardMilp::ImpliedStartup> implied_;
  std::vector<TieColRef> tie_cols_;
};

/// Column handles of one compiled area.
struct AreaCols {
  // u_cols[g][t-1], s_cols[g][t-1] (s empty when the unit needs no startup col)
  std::vector<std::vector<Index>> u_cols, s_cols;
  std::vector<std::vector<Index>> p_cols;                     // p_cols[g][t-1]
  std::map<std::pair<std::string, int>, Index> balance_row;  // (bus, t) -> row
};

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

/// Emits one area's rows and columns. Balance rows are returned so the caller
/// can attach rhs parameters (area model) or tie-flow columns (joint model).
AreaCols emit_area(StandardFormBuilder& b, const SystemInstance& sys, const AreaSystem& a) {
  const int T = sys.periods;
  require(T >= 1, "model: periods must be >= 1");
  require(!a.buses.empty(), "model: area " + a.id + " has no buses");
  require(a.bus(a.reference_bus) != nullptr, "model: reference bus missing in area " + a.id);

  AreaCols cols;
  const size_t G = a.units.size();
  cols.u_cols.resize(G);
  cols.s_cols.resize(G);
  cols.p_cols.resize(G);

  // Binary columns: status first, then startup.
  for (size_t g = 0; g < G; ++g) {
    const Unit& u = a.units[g];
    require(a.bus(u.bus) != nullptr, "model: unit " + u.id + " at unknown bus");
    require(u.p_min >= 0 && u.p_min <= u.p_max, "model: unit " + u.id + " power bounds");
    require(u.ramp_up > 0 && u.ramp_down > 0, "model: unit " + u.id + " ramp limits");
    require(u.min_up >= 1 && u.min_down >= 1, "model: unit " + u.id + " min up/down");
    for (int t = 1; t <= T; ++t)
      cols.u_cols[g].push_back(b.add_binary(u.no_load_cost, {BinKind::Status, a.id, u.id, t}));
  }
  for (size_t g = 0; g < G; ++g) {
    const Unit& u = a.units[g];
    if (!needs_startup_col(u)) continue;
    for (int t = 1; t <= T; ++t) {
      const Index s = b.add_binary(u.startup_cost, {BinKind::Startup, a.id, u.id, t});
      cols.s_cols[g].push_back(s);
      b.add_implied({s, cols.u_cols[g][t - 1], t > 1 ? cols.u_cols[g][t - 2] : -1, u.initial_on});
    }
  }

  // Continuous columns: generation, then angles and flows (split into +/-).
  for (size_t g = 0; g < G; ++g)
    for (int t = 1; t <= T; ++t)
      cols.p_cols[g].push_back(b.add_cont(a.units[g].marginal_cost,
                                          a.id + ".p." + a.units[g].id + "." + std::to_string(t)));

  std::map<std::pair<std::string, int>, std::pair<Index, Index>> theta;  // (bus,t) -> (+,-)
  for (const auto& bus : a.buses) {
    if (bus.id == a.reference_bus) continue;
    for (int t = 1; t <= T; ++t) {
      Index tp = b.add_cont(0.0, a.id + ".th+." + bus.id + "." + std::to_string(t));
      Index tm = b.add_cont(0.0, a.id + ".th-." + bus.id + "." + std::to_string(t));
      theta[{bus.id, t}] = {tp, tm};
    }
  }
  std::map<std::pair<std::string, int>, std::pair<Index, Index>> flow;  // (line,t) -> (+,-)
  for (const auto& l : a.lines) {
    for (int t = 1; t <= T; ++t) {
      Index fp = b.add_cont(0.0, a.id + ".f+." + l.id + "." + std::to_string(t));
      Index fm = b.add_cont(0.0, a.id + ".f-." + l.id + "." + std::to_string(t));
      flow[{l.id, t}] = {fp, fm};
    }
  }

  // Unit logic rows.
  for (size_t g = 0; g < G; ++g) {
    const Unit& u = a.units[g];
    const bool has_s = !cols.s_cols[g].empty();
    const double u0 = u.initial_on ? 1.0 : 0.0;

    for (int t = 1; t <= T; ++t) {
      // p >= p_min u  ->  -p + p_min u <= 0
      Index r = b.le_row(0.0, {RowKind::PMin, a.id, u.id, t});
      b.cont(r, cols.p_cols[g][t - 1], -1.0);
      b.bin(r, cols.u_cols[g][t - 1], u.p_min);
      // p <= p_max u
      r = b.le_row(0.0, {RowKind::PMax, a.id, u.id, t});
      b.cont(r, cols.p_cols[g][t - 1], 1.0);
      b.bin(r, cols.u_cols[g][t - 1], -u.p_max);
    }

    if (has_s) {
      for (int t = 1; t <= T; ++t) {
        // u_t - u_{t-1} - s_t <= 0 (u_0 folded into the rhs)
        Index r = b.le_row(t == 1 ? u0 : 0.0, {RowKind::StartLink, a.id, u.id, t});
        b.bin(r, cols.u_cols[g][t - 1], 1.0);
        if (t > 1) b.bin(r, cols.u_cols[g][t - 2], -1.0);
        b.bin(r, cols.s_cols[g][t - 1], -1.0);
      }
      if (u.min_up > 1) {
        for (int t = 1; t <= T; ++t) {
          // sum_{tau in (t-UT, t]} s_tau <= u_t, window clipped to the horizon
          Index r = b.le_row(0.0, {RowKind::MinUp, a.id, u.id, t});
          for (int tau = std::max(1, t - u.min_up + 1); tau <= t; ++tau)
            b.bin(r, cols.s_cols[g][tau - 1], 1.0);
          b.bin(r, cols.u_cols[g][t - 1], -1.0);
        }
      }
      if (u.min_down > 1) {
        for (int t = 1; t <= T; ++t) {
          // sum_{tau in (t-DT, t]} s_tau <= 1 - u_{t-DT}
          Index r = b.le_row(t - u.min_down >= 1 ? 1.0 : 1.0 - u0,
                             {RowKind::MinDown, a.id, u.id, t});
          for (int tau = std::max(1, t - u.min_down + 1); tau <= t; ++tau)
            b.bin(r, cols.s_cols[g][tau - 1], 1.0);
          if (t - u.min_down >= 1) b.bin(r, cols.u_cols[g][t - u.min_down - 1], 1.0);
        }
      }
    }

    // Initial-state carryover: pin the status while the entering stretch lasts.
    if (u.initial_on) {
      const int forced = std::min(T, std::max(0, u.min_up - u.initial_hours));
      for (int t = 1; t <= forced; ++t) {
        Index r = b.eq_row(1.0, {RowKind::ForcedState, a.id, u.id, t});
        b.bin(r, cols.u_cols[g][t - 1], 1.0);
      }
    } else {
      const int forced = std::min(T, std::max(0, u.min_down - u.initial_hours));
      for (int t = 1; t <= forced; ++t) {
        Index r = b.eq_row(0.0, {RowKind::ForcedState, a.id, u.id, t});
        b.bin(r, cols.u_cols[g][t - 1], 1.0);
      }
    }

    // Ramps between in-horizon periods; startups/shutdowns may jump to p_min.
    const double su = std::max(u.p_min, u.ramp_up);
    const double sd = std::max(u.p_min, u.ramp_down);
    for (int t = 2; t <= T; ++t) {
      // p_t - p_{t-1} <= RU u_{t-1} + SU (1 - u_{t-1})
      Index r = b.le_row(su, {RowKind::RampUp, a.id, u.id, t});
      b.cont(r, cols.p_cols[g][t - 1], 1.0);
      b.cont(r, cols.p_cols[g][t - 2], -1.0);
      b.bin(r, cols.u_cols[g][t - 2], su - u.ramp_up);
      // p_{t-1} - p_t <= RD u_t + SD (1 - u_t)
      r = b.le_row(sd, {RowKind::RampDown, a.id, u.id, t});
      b.cont(r, cols.p_cols[g][t - 2], 1.0);
      b.cont(r, cols.p_cols[g][t - 1], -1.0);
      b.bin(r, cols.u_cols[g][t - 1], sd - u.ramp_down);
    }
  }

  // DC flow definition and line limits.
  for (const auto& l : a.lines) {
    require(l.susceptance != 0.0, "model: degenerate line " + l.id);
    require(a.bus(l.from) && a.bus(l.to), "model: line endpoint missing for " + l.id);
    for (int t = 1; t <= T; ++t) {
      auto [fp, fm] = flow[{l.id, t}];
      Index r = b.eq_row(0.0, {RowKind::FlowDef, a.id, l.id, t});
      b.cont(r, fp, 1.0);
      b.cont(r, fm, -1.0);
      auto theta_of = [&](const std::string& bus, double coef) {
        if (bus == a.reference_bus) return;  // theta fixed at zero
        auto [tp, tm] = theta[{bus, t}];
        b.cont(r, tp, coef);
        b.cont(r, tm, -coef);
      };
      theta_of(l.from, -l.susceptance);
      theta_of(l.to, l.susceptance);

      Index ru = b.le_row(l.rating, {RowKind::FlowUpper, a.id, l.id, t});
      b.cont(ru, fp, 1.0);
      b.cont(ru, fm, -1.0);
      Index rl = b.le_row(l.rating, {RowKind::FlowLower, a.id, l.id, t});
      b.cont(rl, fp, -1.0);
      b.cont(rl, fm, 1.0);
    }
  }

  // Nodal balance: generation plus net line inflow equals demand (tie terms
  // are attached by the caller).
  for (const auto& bus : a.buses) {
    for (int t = 1; t <= T; ++t) {
      Index r = b.eq_row(bus.demand[t - 1], {RowKind::Balance, a.id, bus.id, t});
      cols.balance_row[{bus.id, t}] = r;
    }
  }
  for (size_t g = 0; g < G; ++g)
    for (int t = 1; t <= T; ++t)
      b.cont(cols.balance_row.at({a.units[g].bus, t}), cols.p_cols[g][t - 1], 1.0);
  for (const auto& l : a.lines) {
    for (int t = 1; t <= T; ++t) {
      auto [fp, fm] = flow[{l.id, t}];
      const Index rf = cols.balance_row.at({l.from, t});
      const Index rt = cols.balance_row.at({l.to, t});
      b.cont(rf, fp, -1.0);
      b.cont(rf, fm, 1.0);
      b.cont(rt, fp, 1.0);
      b.cont(rt, fm, -1.0);
    }
  }

  // Spinning reserve: sum_g (p_max u - p) >= R_t.
  for (int t = 1; t <= T; ++t) {
    const double req = a.reserve.empty() ? 0.0 : a.reserve[t - 1];
    if (req <= 0.0) continue;
    Index r = b.ge_row(req, {RowKind::Reserve, a.id, a.id, t});
    for (size_t g = 0; g < G; ++g) {
      b.bin(r, cols.u_cols[g][t - 1], a.units[g].p_max);
      b.cont(r, cols.p_cols[g][t - 1], -1.0);
    }
  }

  return cols;
}

/// Oriented sign with which tie flow z enters the rhs of an endpoint's
/// balance row: rhs = demand + sign * z.
double endpoint_sign(const TieLine& t, const std::string& area_id) {
  return t.from.area == area_id ? +1.0 : -1.0;
}

}  // namespace

StandardMilp build_area_milp(const SystemInstance& sys, const std::string& area_id) {
  const AreaSystem* a = sys.area(area_id);
  require(a != nullptr, "build_area_milp: unknown area " + area_id);

  StandardFormBuilder b;
  AreaCols cols = emit_area(b, sys, *a);

  std::set<std::pair<std::string, int>> used;
  for (const auto& tie : sys.tielines) {
    if (tie.from.area != area_id && tie.to.area != area_id) continue;
    const std::string& bus = tie.from.area == area_id ? tie.from.bus : tie.to.bus;
    require(a->bus(bus) != nullptr, "build_area_milp: tie " + tie.id + " touches missing bus " + bus);
    require(static_cast<int>(tie.z_min.size()) == sys.periods &&
                static_cast<int>(tie.z_max.size()) == sys.periods,
            "build_area_milp: tie " + tie.id + " bound series length");
    const double sign = endpoint_sign(tie, area_id);
    for (int t = 1; t <= sys.periods; ++t) {
      require(used.insert({bus, t}).second,
              "build_area_milp: parameter rows must be disjoint (bus " + bus + ")");
      b.add_param({cols.balance_row.at({bus, t}), tie.id, t, sign,
                   tie.z_min[t - 1], tie.z_max[t - 1]});
    }
  }
  return b.build();
}

StandardMilp build_centralized_milp(const SystemInstance& sys) {
  require(!sys.areas.empty(), "build_centralized_milp: no areas");
  StandardFormBuilder b;
  std::map<std::string, AreaCols> area_cols;
  for (const auto& a : sys.areas) area_cols.emplace(a.id, emit_area(b, sys, a));

  for (const auto& tie : sys.tielines) {
    require(sys.area(tie.from.area) && sys.area(tie.to.area),
            "build_centralized_milp: dangling tie-line endpoint on " + tie.id);
    require(static_cast<int>(tie.z_min.size()) == sys.periods &&
                static_cast<int>(tie.z_max.size()) == sys.periods,
            "build_centralized_milp: tie " + tie.id + " bound series length");
    for (int t = 1; t <= sys.periods; ++t) {
      // One split copy of the oriented flow per endpoint area.
      std::vector<std::pair<std::string, std::string>> ends = {{tie.from.area, tie.from.bus},
                                                               {tie.to.area, tie.to.bus}};
      std::vector<std::pair<Index, Index>> zcols;
      for (const auto& [area_id, bus] : ends) {
        Index zp = b.add_cont(0.0, area_id + ".z+." + tie.id + "." + std::to_string(t));
        Index zm = b.add_cont(0.0, area_id + ".z-." + tie.id + "." + std::to_string(t));
        b.add_tie_col({tie.id, area_id, t, zp, zm});
        zcols.push_back({zp, zm});
        // Balance row: LHS - sign*z = demand.
        const TieLine& tt = tie;
        const double sign = endpoint_sign(tt, area_id);
        const Index row = area_cols.at(area_id).balance_row.at({bus, t});
        b.cont(row, zp, -sign);
        b.cont(row, zm, sign);
        // Flow bounds z_min <= z <= z_max.
        Index ru = b.le_row(tie.z_max[t - 1], {RowKind::TieUpper, area_id, tie.id, t});
        b.cont(ru, zp, 1.0);
        b.cont(ru, zm, -1.0);
        Index rl = b.le_row(-tie.z_min[t - 1], {RowKind::TieLower, area_id, tie.id, t});
        b.cont(rl, zp, -1.0);
        b.cont(rl, zm, 1.0);
      }
      // Consensus: the two copies agree.
      Index rc = b.eq_row(0.0, {RowKind::Consensus, "", tie.id, t});
      b.cont(rc, zcols[0].first, 1.0);
      b.cont(rc, zcols[0].second, -1.0);
      b.cont(rc, zcols[1].first, -1.0);
      b.cont(rc, zcols[1].second, 1.0);
    }
  }
  return b.build();
}

MilpProblem to_milp_problem(const StandardMilp& m, const Vec& rhs) {
  if (rhs.size() != m.num_rows()) throw std::invalid_argument("to_milp_problem: rhs size mismatch");
  MilpProblem p;
  const Index nb = m.num_binaries(), nc = m.num_cont();
  p.A.resize(m.num_rows(), nb + nc);
  p.A.leftCols(nb) = m.A_bin;
  p.A.rightCols(nc) = m.A_cont;
  p.b = rhs;
  p.c.resize(nb + nc);
  p.c.head(nb) = m.c_bin;
  p.c.tail(nc) = m.c_cont;
  p.lo = Vec::Zero(nb + nc);
  p.up = Vec::Constant(nb + nc, kInf);
  p.up.head(nb).setOnes();
  p.binary_cols.resize(static_cast<size_t>(nb));
  for (Index j = 0; j < nb; ++j) p.binary_cols[static_cast<size_t>(j)] = j;
  return p;
}

MilpSolution solve_milp(const StandardMilp& m, const Vec& rhs, const SolverConfig& cfg) {
  return solve_milp_problem(to_milp_problem(m, rhs), cfg);
}

LpSolution solve_lp_fixed_binaries(const StandardMilp& m, const IntVec& x, const Vec& rhs,
                                   const SolverConfig& cfg) {
  if (x.size() != m.num_binaries())
    throw std::invalid_argument("solve_lp_fixed_binaries: commitment length mismatch");
  if (rhs.size() != m.num_rows())
    throw std::invalid_argument("solve_lp_fixed_binaries: rhs size mismatch");
  const Vec rhs_y = rhs - m.A_bin * x.cast<double>();
  LpSolution sol = solve_lp_nonneg(m.A_cont, rhs_y, m.c_cont, cfg);
  const double fixed_cost = m.c_bin.dot(x.cast<double>().matrix());
  if (sol.status == LpStatus::Optimal) sol.objective += fixed_cost;
  return sol;
}

}  // namespace vfcoord
