// Domain value types shared across schemes, bounds and experiments.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <initializer_list>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace relaylab {

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct AllocationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

namespace detail {

constexpr double kSimplexTol = 1e-12;

inline void check_field(double v, const char* name) {
  if (std::isnan(v) || std::isinf(v)) {
    throw ValidationError(std::string(name) + " not finite");
  }
  if (v < 0.0) {
    throw ValidationError(std::string(name) + " negative");
  }
}

inline void check_unit_sum(std::initializer_list<double> parts, const char* what) {
  double sum = 0.0;
  for (double p : parts) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw AllocationError(std::string(what) + " has a negative or non-finite part");
    }
    sum += p;
  }
  if (std::fabs(sum - 1.0) > kSimplexTol) {
    throw AllocationError(std::string(what) + " parts do not sum to 1");
  }
}

// Power budgets scale with the budget itself; a fixed absolute tolerance
// would reject legitimate splits of large powers.
inline void check_budget_sum(std::initializer_list<double> parts, double total,
                             const char* what) {
  double sum = 0.0;
  for (double p : parts) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw AllocationError(std::string(what) + " has a negative or non-finite part");
    }
    sum += p;
  }
  if (std::fabs(sum - total) > kSimplexTol * std::max(1.0, total)) {
    throw AllocationError(std::string(what) + " parts do not sum to the budget");
  }
}

inline void check_fraction(double v, const char* name) {
  if (!(v >= 0.0) || !(v <= 1.0) || !std::isfinite(v)) {
    throw AllocationError(std::string(name) + " outside [0,1]");
  }
}

}  // namespace detail

/// Link amplitude gains of the two-relay network, unit-variance noise.
struct ChannelGains {
  double h01 = 0, h02 = 0, h12 = 0, h13 = 0, h23 = 0;
};

/// Average transmit power limits, linear scale.
struct PowerBudget {
  double p0 = 0, p1 = 0, p2 = 0;
};

struct Scenario {
  ChannelGains gains;
  PowerBudget budget;
};

inline Scenario validate_scenario(const ChannelGains& g, const PowerBudget& b) {
  detail::check_field(g.h01, "h01");
  detail::check_field(g.h02, "h02");
  detail::check_field(g.h12, "h12");
  detail::check_field(g.h13, "h13");
  detail::check_field(g.h23, "h23");
  detail::check_field(b.p0, "p0");
  detail::check_field(b.p1, "p1");
  detail::check_field(b.p2, "p2");
  return Scenario{g, b};
}

/// Relabels relay 1 <-> relay 2. Swapping relay identities also swaps the
/// odd/even slot roles of the successive protocols, which the slot-symmetric
/// rate expressions absorb; consumers that need h01 >= h02 use this.
inline Scenario swap_relays(const Scenario& s) {
  Scenario out = s;
  std::swap(out.gains.h01, out.gains.h02);
  std::swap(out.gains.h13, out.gains.h23);
  std::swap(out.budget.p1, out.budget.p2);
  return out;
}

// ---------------------------------------------------------------------------
// Per-scheme decision variables. Constructors enforce the simplex/budget
// equalities; evaluation code may assume them.
// ---------------------------------------------------------------------------

/// Two-slot schedule, source power split across the slots.
struct DpcAllocation {
  double t1, t2;
  double p0_1, p0_2;

  DpcAllocation(double t1_, double t2_, double p01, double p02, double p0_total)
      : t1(t1_), t2(t2_), p0_1(p01), p0_2(p02) {
    detail::check_unit_sum({t1, t2}, "time split");
    detail::check_budget_sum({p0_1, p0_2}, p0_total, "source power split");
  }
};

/// Two-slot schedule with superposition fractions alpha and relayed-part
/// fractions theta per side.
struct BmeSuccAllocation {
  double t1, t2;
  double p0_1, p0_2;
  double alpha1, alpha2;
  double theta1, theta2;

  BmeSuccAllocation(double t1_, double t2_, double p01, double p02, double p0_total,
                    double a1, double a2, double th1, double th2)
      : t1(t1_), t2(t2_), p0_1(p01), p0_2(p02),
        alpha1(a1), alpha2(a2), theta1(th1), theta2(th2) {
    detail::check_unit_sum({t1, t2}, "time split");
    detail::check_budget_sum({p0_1, p0_2}, p0_total, "source power split");
    detail::check_fraction(alpha1, "alpha1");
    detail::check_fraction(alpha2, "alpha2");
    detail::check_fraction(theta1, "theta1");
    detail::check_fraction(theta2, "theta2");
  }
};

/// Two-slot schedule with fresh-message power fractions beta per side.
struct BmeBackAllocation {
  double t1, t2;
  double p0_1, p0_2;
  double beta1, beta2;

  BmeBackAllocation(double t1_, double t2_, double p01, double p02, double p0_total,
                    double b1, double b2)
      : t1(t1_), t2(t2_), p0_1(p01), p0_2(p02), beta1(b1), beta2(b2) {
    detail::check_unit_sum({t1, t2}, "time split");
    detail::check_budget_sum({p0_1, p0_2}, p0_total, "source power split");
    detail::check_fraction(beta1, "beta1");
    detail::check_fraction(beta2, "beta2");
  }
};

/// Composite scheme: one binning relay, interference pre-cancellation on the
/// other side; alpha splits the slot-1 source power.
struct BmeDpcAllocation {
  double t1, t2;
  double p0_1, p0_2;
  double alpha;

  BmeDpcAllocation(double t1_, double t2_, double p01, double p02, double p0_total,
                   double a)
      : t1(t1_), t2(t2_), p0_1(p01), p0_2(p02), alpha(a) {
    detail::check_unit_sum({t1, t2}, "time split");
    detail::check_budget_sum({p0_1, p0_2}, p0_total, "source power split");
    detail::check_fraction(alpha, "alpha");
  }
};

/// Broadcast/coherent-access schedule: private/common power splits at the
/// source and relay 1; relay 2 spends its whole budget on the common message.
struct DdfAllocation {
  double t3, t4;
  double p0p, p0c;
  double p1p, p1c;

  DdfAllocation(double t3_, double t4_, double p0p_, double p0c_, double p0_total,
                double p1p_, double p1c_, double p1_total)
      : t3(t3_), t4(t4_), p0p(p0p_), p0c(p0c_), p1p(p1p_), p1c(p1c_) {
    detail::check_unit_sum({t3, t4}, "time split");
    detail::check_budget_sum({p0p, p0c}, p0_total, "source power split");
    detail::check_budget_sum({p1p, p1c}, p1_total, "relay-1 power split");
  }
};

/// Four-slot schedule interpolating between the successive and the
/// simultaneous protocols.
struct SsrdAllocation {
  double t1, t2, t3, t4;
  double p0_1, p0_2, p0p3, p0c3;
  double p1_2, p1p4, p1c4;
  double p2_1, p2p4, p2c4;

  SsrdAllocation(double t1_, double t2_, double t3_, double t4_,
                 double p01, double p02, double p0p3_, double p0c3_, double p0_total,
                 double p12, double p1p4_, double p1c4_, double p1_total,
                 double p21, double p2p4_, double p2c4_, double p2_total)
      : t1(t1_), t2(t2_), t3(t3_), t4(t4_),
        p0_1(p01), p0_2(p02), p0p3(p0p3_), p0c3(p0c3_),
        p1_2(p12), p1p4(p1p4_), p1c4(p1c4_),
        p2_1(p21), p2p4(p2p4_), p2c4(p2c4_) {
    detail::check_unit_sum({t1, t2, t3, t4}, "time split");
    detail::check_budget_sum({p0_1, p0_2, p0p3, p0c3}, p0_total, "source power split");
    detail::check_budget_sum({p1_2, p1p4, p1c4}, p1_total, "relay-1 power split");
    detail::check_budget_sum({p2_1, p2p4, p2c4}, p2_total, "relay-2 power split");
  }
};

/// Cut-set bound decision variables: slot durations and per-slot powers.
struct BoundAllocation {
  double t1, t2, t3, t4;
  double p0_1, p0_2, p0_3;
  double p1_2, p1_4;
  double p2_1, p2_4;

  BoundAllocation(double t1_, double t2_, double t3_, double t4_,
                  double p01, double p02, double p03, double p0_total,
                  double p12, double p14, double p1_total,
                  double p21, double p24, double p2_total)
      : t1(t1_), t2(t2_), t3(t3_), t4(t4_),
        p0_1(p01), p0_2(p02), p0_3(p03),
        p1_2(p12), p1_4(p14), p2_1(p21), p2_4(p24) {
    detail::check_unit_sum({t1, t2, t3, t4}, "time split");
    detail::check_budget_sum({p0_1, p0_2, p0_3}, p0_total, "source power split");
    detail::check_budget_sum({p1_2, p1_4}, p1_total, "relay-1 power split");
    detail::check_budget_sum({p2_1, p2_4}, p2_total, "relay-2 power split");
  }
};

// ---------------------------------------------------------------------------

/// Achieved rate plus its decomposition. `total` always equals the minimum
/// of `cuts` bit-exactly; `components` and `alloc` are named diagnostics.
struct RateReport {
  double total = 0.0;
  std::vector<std::pair<std::string, double>> components;
  std::vector<std::pair<std::string, double>> cuts;
  std::vector<std::pair<std::string, double>> alloc;

  double min_cut() const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& [name, v] : cuts) m = std::min(m, v);
    return m;
  }
  std::optional<double> find(const std::string& key) const {
    for (const auto& [k, v] : alloc)
      if (k == key) return v;
    for (const auto& [k, v] : components)
      if (k == key) return v;
    return std::nullopt;
  }
};

/// Deterministic search effort knobs.
struct OptimizerConfig {
  int grid_points_per_dim = 9;
  int multistarts = 8;
  double refine_tol_rate = 1e-9;
  double refine_tol_step = 1e-6;
  std::uint64_t seed = 1;

  void validate() const {
    if (grid_points_per_dim < 2) throw ValidationError("grid_points_per_dim must be >= 2");
    if (multistarts < 1) throw ValidationError("multistarts must be >= 1");
    if (!(refine_tol_rate > 0)) throw ValidationError("refine_tol_rate must be positive");
    if (!(refine_tol_step > 0)) throw ValidationError("refine_tol_step must be positive");
  }
};

// ---------------------------------------------------------------------------
// Scenario text files: one `key = value` per line, `#` comments. Powers are
// given either linear (p0,p1,p2) or in dB (p0_db,...), never both.
// ---------------------------------------------------------------------------

struct ScenarioFile {
  ChannelGains gains;
  std::optional<PowerBudget> budget;  // absent when the file only fixes gains
};

inline ScenarioFile parse_scenario(std::istream& in) {
  std::map<std::string, double> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::string key, eq;
    double value;
    std::istringstream ls(line);
    if (!(ls >> key)) continue;  // blank
    if (!(ls >> eq) || eq != "=" || !(ls >> value)) {
      throw ValidationError("scenario line " + std::to_string(lineno) +
                            ": expected `key = value`");
    }
    std::string trailing;
    if (ls >> trailing) {
      throw ValidationError("scenario line " + std::to_string(lineno) +
                            ": trailing content after value");
    }
    if (kv.count(key)) throw ValidationError("duplicate key " + key);
    kv[key] = value;
  }

  auto take = [&kv](const std::string& key) -> std::optional<double> {
    auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    double v = it->second;
    kv.erase(it);
    return v;
  };
  auto require = [&take](const std::string& key) {
    auto v = take(key);
    if (!v) throw ValidationError("missing key " + key);
    return *v;
  };

  ScenarioFile out;
  out.gains.h01 = require("h01");
  out.gains.h02 = require("h02");
  out.gains.h12 = require("h12");
  out.gains.h13 = require("h13");
  out.gains.h23 = require("h23");

  bool any_power = false, all_power = true;
  double p[3] = {0, 0, 0};
  const char* lin_keys[3] = {"p0", "p1", "p2"};
  const char* db_keys[3] = {"p0_db", "p1_db", "p2_db"};
  for (int i = 0; i < 3; ++i) {
    auto lin = take(lin_keys[i]);
    auto db = take(db_keys[i]);
    if (lin && db) {
      throw ValidationError(std::string("conflicting keys ") + lin_keys[i] + " and " +
                            db_keys[i]);
    }
    if (lin) p[i] = *lin;
    else if (db) p[i] = db_to_linear(*db);
    else { all_power = false; continue; }
    any_power = true;
  }
  if (any_power && !all_power) {
    throw ValidationError("powers must be given for all of p0, p1, p2 or none");
  }
  if (!kv.empty()) throw ValidationError("unknown key " + kv.begin()->first);

  if (any_power) {
    out.budget = PowerBudget{p[0], p[1], p[2]};
    validate_scenario(out.gains, *out.budget);
  } else {
    validate_scenario(out.gains, PowerBudget{});
  }
  return out;
}

inline ScenarioFile load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open scenario file " + path);
  return parse_scenario(in);
}

}  // namespace relaylab
