// Curve reproduction sweeps: rate versus relay power under four source-power
// regimes, and rate versus inter-relay gain, emitted as CSV and plot scripts.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "relaylab/bounds.hpp"
#include "relaylab/model.hpp"
#include "relaylab/schemes.hpp"

namespace relaylab {

enum class SweepKind { RELAY_POWER, INTER_RELAY_GAIN };

struct SweepConfig {
  SweepKind kind = SweepKind::RELAY_POWER;
  ChannelGains base_gains{1, 1, 1, 1, 1};

  // RELAY_POWER: axis is P1 = P2 in dB, P0 = axis + p0_offset_db.
  double p0_offset_db = 0.0;
  // INTER_RELAY_GAIN: axis is h12 in power dB (h12 = 10^(dB/20)); powers fixed.
  PowerBudget fixed_powers{10, 10, 10};

  double axis_start_db = -10.0;
  double axis_stop_db = 30.0;
  double axis_step_db = 2.0;

  std::vector<SchemeId> schemes{SchemeId::DPC};
  std::vector<BoundKind> bounds;
  OptimizerConfig optimizer;
  OptimizerConfig bound_optimizer = default_bound_config();

  void validate() const {
    if (!(axis_step_db > 0)) throw ValidationError("axis step must be positive");
    if (axis_stop_db < axis_start_db) throw ValidationError("axis stop below start");
    if (schemes.empty() && bounds.empty()) throw ValidationError("nothing to sweep");
    optimizer.validate();
    validate_scenario(base_gains, fixed_powers);
  }

  std::vector<double> axis() const {
    std::vector<double> xs;
    for (double v = axis_start_db; v <= axis_stop_db + 1e-9; v += axis_step_db) {
      xs.push_back(v);
    }
    return xs;
  }
};

struct SweepRow {
  std::string scenario_id;
  double axis_value = 0.0;
  ChannelGains gains;
  double p0_db = 0.0, p1_db = 0.0, p2_db = 0.0;
  std::string scheme;
  double rate_bpcu = 0.0;
  double t1 = 0.0, t2 = 0.0, t3 = 0.0, t4 = 0.0;
  std::string alloc_params;
  bool relays_swapped = false;
};

namespace detail {

inline std::string fmt9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

inline std::string flatten_alloc(const RateReport& rep) {
  std::string out;
  for (const auto& [k, v] : rep.alloc) {
    if (!out.empty()) out += ';';
    out += k;
    out += '=';
    out += fmt9(v);
  }
  return out;
}

inline double alloc_or_zero(const RateReport& rep, const char* key) {
  const auto v = rep.find(key);
  return v ? *v : 0.0;
}

inline SweepRow make_row(std::string id, double axis_value, const Scenario& s,
                         const std::string& scheme, const RateReport& rep,
                         bool swapped) {
  SweepRow row;
  row.scenario_id = std::move(id);
  row.axis_value = axis_value;
  row.gains = s.gains;
  row.p0_db = linear_to_db(s.budget.p0);
  row.p1_db = linear_to_db(s.budget.p1);
  row.p2_db = linear_to_db(s.budget.p2);
  row.scheme = scheme;
  row.rate_bpcu = rep.total;
  row.t1 = alloc_or_zero(rep, "t1");
  row.t2 = alloc_or_zero(rep, "t2");
  row.t3 = alloc_or_zero(rep, "t3");
  row.t4 = alloc_or_zero(rep, "t4");
  row.alloc_params = flatten_alloc(rep);
  row.relays_swapped = swapped;
  return row;
}

}  // namespace detail

/// All requested schemes and bounds at one operating point. Scheme results
/// feed the chained warm starts and the bound searches; schemes that need
/// h01 >= h02 run on the relabeled scenario when necessary.
struct PointResults {
  std::map<std::string, RateReport> by_name;
  bool relays_swapped = false;
};

inline PointResults evaluate_point(const Scenario& scenario,
                                   const std::vector<SchemeId>& schemes,
                                   const std::vector<BoundKind>& bounds,
                                   const OptimizerConfig& cfg,
                                   const OptimizerConfig& bound_cfg = default_bound_config()) {
  PointResults out;
  const bool swapped = scenario.gains.h01 < scenario.gains.h02;
  const Scenario s = swapped ? swap_relays(scenario) : scenario;
  out.relays_swapped = swapped;

  std::optional<RateReport> dpc, succ, back, ddf, ssrd;
  auto want = [&schemes](SchemeId id) {
    return std::find(schemes.begin(), schemes.end(), id) != schemes.end();
  };

  const bool need_dpc = want(SchemeId::DPC) || want(SchemeId::SSRD);
  const bool need_ddf = want(SchemeId::DDF) || want(SchemeId::SSRD);
  const bool need_succ = want(SchemeId::BME_SUCC) || want(SchemeId::BME_BACK) ||
                         want(SchemeId::BME_DPC);

  if (need_dpc) dpc = optimize_scheme(SchemeId::DPC, s.gains, s.budget, cfg);
  if (need_succ) succ = optimize_scheme(SchemeId::BME_SUCC, s.gains, s.budget, cfg);
  if (succ) {
    back = optimize_scheme(SchemeId::BME_BACK, s.gains, s.budget, cfg,
                           {seed_back_from_succ(*succ)});
  }
  if (need_ddf) ddf = optimize_scheme(SchemeId::DDF, s.gains, s.budget, cfg);
  if (want(SchemeId::SSRD)) {
    OptimizerConfig scfg = cfg;
    if (cfg.grid_points_per_dim > 5) {
      scfg.grid_points_per_dim = 5;  // ~12 free dims; trade grid for restarts
      scfg.multistarts = std::max(cfg.multistarts, 32);
    }
    ssrd = optimize_scheme(SchemeId::SSRD, s.gains, s.budget, scfg,
                           {seed_ssrd_from_dpc(s.gains, s.budget, *dpc),
                            seed_ssrd_from_ddf(s.gains, s.budget, *ddf)});
  }

  if (want(SchemeId::DPC)) out.by_name[scheme_name(SchemeId::DPC)] = *dpc;
  if (want(SchemeId::BME_SUCC)) out.by_name[scheme_name(SchemeId::BME_SUCC)] = *succ;
  if (want(SchemeId::BME_BACK)) out.by_name[scheme_name(SchemeId::BME_BACK)] = *back;
  if (want(SchemeId::BME_DPC)) {
    out.by_name[scheme_name(SchemeId::BME_DPC)] =
        optimize_bme_dpc(s.gains, s.budget, cfg, back).report;
  }
  if (want(SchemeId::DDF)) out.by_name[scheme_name(SchemeId::DDF)] = *ddf;
  if (want(SchemeId::SSRD)) out.by_name[scheme_name(SchemeId::SSRD)] = *ssrd;

  for (BoundKind k : bounds) {
    if (k == BoundKind::FULL_CUTSET) {
      std::vector<std::vector<double>> seeds;
      if (dpc) seeds.push_back(seed_bound_from_two_slot(s.budget, *dpc));
      if (back) seeds.push_back(seed_bound_from_two_slot(s.budget, *back));
      if (ddf) seeds.push_back(seed_bound_from_ddf(s.budget, *ddf));
      if (ssrd) seeds.push_back(seed_bound_from_ssrd(s.budget, *ssrd));
      out.by_name[bound_name(k)] = cutset_optimize(s.gains, s.budget, bound_cfg, seeds);
    } else if (k == BoundKind::SUCCESSIVE_CUTSET) {
      std::vector<std::vector<double>> seeds;
      if (dpc) seeds.push_back(seed_successive_bound(*dpc));
      if (back) seeds.push_back(seed_successive_bound(*back));
      out.by_name[bound_name(k)] =
          successive_cutset_optimize(s.gains, s.budget, bound_cfg, seeds);
    } else {
      throw ValidationError("the linear bound needs gamma ratios; use the study interface");
    }
  }
  return out;
}

inline std::vector<SweepRow> sweep_relay_power(const SweepConfig& cfg) {
  if (cfg.kind != SweepKind::RELAY_POWER) throw ValidationError("wrong sweep kind");
  cfg.validate();
  std::vector<SweepRow> rows;
  const auto axis = cfg.axis();
  for (size_t i = 0; i < axis.size(); ++i) {
    const double p1_db = axis[i];
    PowerBudget budget{db_to_linear(p1_db + cfg.p0_offset_db), db_to_linear(p1_db),
                       db_to_linear(p1_db)};
    const Scenario scenario = validate_scenario(cfg.base_gains, budget);
    const auto res = evaluate_point(scenario, cfg.schemes, cfg.bounds, cfg.optimizer,
                                    cfg.bound_optimizer);
    char id[64];
    std::snprintf(id, sizeof id, "relay-power_%03zu", i);
    for (const auto& [name, rep] : res.by_name) {
      rows.push_back(detail::make_row(id, p1_db, scenario, name, rep, res.relays_swapped));
    }
  }
  return rows;
}

inline std::vector<SweepRow> sweep_inter_relay_gain(const SweepConfig& cfg) {
  if (cfg.kind != SweepKind::INTER_RELAY_GAIN) throw ValidationError("wrong sweep kind");
  cfg.validate();
  std::vector<SweepRow> rows;
  const auto axis = cfg.axis();
  for (size_t i = 0; i < axis.size(); ++i) {
    const double h12 = std::pow(10.0, axis[i] / 20.0);
    ChannelGains gains = cfg.base_gains;
    gains.h12 = h12;
    const Scenario scenario = validate_scenario(gains, cfg.fixed_powers);
    const auto res = evaluate_point(scenario, cfg.schemes, cfg.bounds, cfg.optimizer,
                                    cfg.bound_optimizer);
    char id[64];
    std::snprintf(id, sizeof id, "inter-relay-gain_%03zu", i);
    for (const auto& [name, rep] : res.by_name) {
      rows.push_back(detail::make_row(id, h12, scenario, name, rep, res.relays_swapped));
    }
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Output writers
// ---------------------------------------------------------------------------

inline size_t write_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
  std::ostringstream buf;
  buf << "scenario_id,axis_value,h01,h02,h12,h13,h23,p0_db,p1_db,p2_db,"
         "scheme,rate_bpcu,t1,t2,t3,t4,alloc_params\n";
  for (const auto& r : rows) {
    using detail::fmt9;
    buf << r.scenario_id << ',' << fmt9(r.axis_value) << ',' << fmt9(r.gains.h01) << ','
        << fmt9(r.gains.h02) << ',' << fmt9(r.gains.h12) << ',' << fmt9(r.gains.h13)
        << ',' << fmt9(r.gains.h23) << ',' << fmt9(r.p0_db) << ',' << fmt9(r.p1_db)
        << ',' << fmt9(r.p2_db) << ',' << r.scheme << ',' << fmt9(r.rate_bpcu) << ','
        << fmt9(r.t1) << ',' << fmt9(r.t2) << ',' << fmt9(r.t3) << ',' << fmt9(r.t4)
        << ',' << r.alloc_params << '\n';
  }
  const std::string s = buf.str();
  out << s;
  if (!out) throw std::runtime_error("write failed");
  return s.size();
}

inline size_t write_csv(const std::vector<SweepRow>& rows, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  return write_csv(rows, out);
}

/// Plain-text plot description: one `# series <name>` header per scheme
/// followed by `x y` pairs, series separated by blank lines.
inline size_t emit_plot_script(const std::vector<SweepRow>& rows, std::ostream& out) {
  if (rows.empty()) throw ValidationError("no rows to plot");
  std::vector<std::string> order;
  std::map<std::string, std::vector<std::pair<double, double>>> series;
  for (const auto& r : rows) {
    if (!series.count(r.scheme)) order.push_back(r.scheme);
    series[r.scheme].emplace_back(r.axis_value, r.rate_bpcu);
  }
  std::ostringstream buf;
  bool first = true;
  for (const auto& name : order) {
    if (!first) buf << '\n';
    first = false;
    buf << "# series " << name << '\n';
    for (const auto& [x, y] : series[name]) {
      buf << detail::fmt9(x) << ' ' << detail::fmt9(y) << '\n';
    }
  }
  const std::string s = buf.str();
  out << s;
  if (!out) throw std::runtime_error("write failed");
  return s.size();
}

inline size_t emit_plot_script(const std::vector<SweepRow>& rows, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  return emit_plot_script(rows, out);
}

// ---------------------------------------------------------------------------
// Sweep configuration files: same `key = value` grammar as scenario files.
// ---------------------------------------------------------------------------

inline SweepConfig parse_sweep_config(std::istream& in) {
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string key, eq, value;
    if (!(ls >> key)) continue;
    if (!(ls >> eq) || eq != "=" || !(ls >> value)) {
      throw ValidationError("sweep config line " + std::to_string(lineno) +
                            ": expected `key = value`");
    }
    if (kv.count(key)) throw ValidationError("duplicate key " + key);
    kv[key] = value;
  }

  SweepConfig cfg;
  auto take = [&kv](const std::string& key) -> std::optional<std::string> {
    auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    std::string v = it->second;
    kv.erase(it);
    return v;
  };
  auto num = [](const std::string& key, const std::string& v) {
    try {
      size_t pos = 0;
      const double d = std::stod(v, &pos);
      if (pos != v.size()) throw std::invalid_argument(v);
      return d;
    } catch (const std::exception&) {
      throw ValidationError("key " + key + ": not a number: " + v);
    }
  };
  auto take_num = [&](const std::string& key, double fallback) {
    auto v = take(key);
    return v ? num(key, *v) : fallback;
  };

  const auto kind = take("kind");
  if (!kind) throw ValidationError("missing key kind");
  if (*kind == "relay-power") cfg.kind = SweepKind::RELAY_POWER;
  else if (*kind == "inter-relay-gain") cfg.kind = SweepKind::INTER_RELAY_GAIN;
  else throw ValidationError("kind must be relay-power or inter-relay-gain");

  cfg.base_gains.h01 = take_num("h01", 1.0);
  cfg.base_gains.h02 = take_num("h02", 1.0);
  cfg.base_gains.h12 = take_num("h12", 1.0);
  cfg.base_gains.h13 = take_num("h13", 1.0);
  cfg.base_gains.h23 = take_num("h23", 1.0);

  if (cfg.kind == SweepKind::RELAY_POWER) {
    cfg.p0_offset_db = take_num("p0_offset_db", 0.0);
    cfg.axis_start_db = take_num("axis_start_db", -10.0);
    cfg.axis_stop_db = take_num("axis_stop_db", 30.0);
    cfg.axis_step_db = take_num("axis_step_db", 2.0);
  } else {
    cfg.fixed_powers.p0 = db_to_linear(take_num("p0_db", 10.0));
    cfg.fixed_powers.p1 = db_to_linear(take_num("p1_db", 10.0));
    cfg.fixed_powers.p2 = db_to_linear(take_num("p2_db", 10.0));
    cfg.axis_start_db = take_num("axis_start_db", -20.0);
    cfg.axis_stop_db = take_num("axis_stop_db", 20.0);
    cfg.axis_step_db = take_num("axis_step_db", 2.0);
  }

  if (auto v = take("schemes")) {
    cfg.schemes.clear();
    std::istringstream ss(*v);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      const auto id = scheme_from_name(tok);
      if (!id) throw ValidationError("unknown scheme " + tok);
      cfg.schemes.push_back(*id);
    }
  }
  cfg.bounds.clear();
  if (auto v = take("bounds")) {
    std::istringstream ss(*v);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      const auto k = bound_from_name(tok);
      if (!k || *k == BoundKind::LOW_SNR_LINEAR) {
        throw ValidationError("unknown sweep bound " + tok);
      }
      cfg.bounds.push_back(*k);
    }
  }

  cfg.optimizer.grid_points_per_dim = static_cast<int>(take_num("grid", 9));
  cfg.optimizer.multistarts = static_cast<int>(take_num("multistarts", 8));
  cfg.optimizer.seed = static_cast<std::uint64_t>(take_num("seed", 1));
  cfg.bound_optimizer.grid_points_per_dim = static_cast<int>(take_num("bound_grid", 13));
  cfg.bound_optimizer.multistarts = static_cast<int>(take_num("bound_multistarts", 8));
  cfg.bound_optimizer.seed = cfg.optimizer.seed;

  if (!kv.empty()) throw ValidationError("unknown key " + kv.begin()->first);
  cfg.validate();
  return cfg;
}

inline SweepConfig load_sweep_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open sweep config " + path);
  return parse_sweep_config(in);
}

inline std::vector<SweepRow> run_sweep(const SweepConfig& cfg) {
  return cfg.kind == SweepKind::RELAY_POWER ? sweep_relay_power(cfg)
                                            : sweep_inter_relay_gain(cfg);
}

}  // namespace relaylab
