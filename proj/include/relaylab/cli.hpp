// Command-line front end: rate maximization, bounds, sweeps, asymptotic
// studies and full comparisons over scenario files.
#pragma once

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "relaylab/asymptotics.hpp"
#include "relaylab/bounds.hpp"
#include "relaylab/experiments.hpp"
#include "relaylab/model.hpp"
#include "relaylab/schemes.hpp"

namespace relaylab::cli {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;
constexpr int kExitInfeasible = 3;

namespace detail {

inline std::string fmt_rate(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9f", v);
  return buf;
}

inline PowerBudget require_budget(const ScenarioFile& sf) {
  if (!sf.budget) {
    throw ValidationError("scenario file must set p0/p1/p2 (linear or dB)");
  }
  return *sf.budget;
}

inline std::vector<double> parse_db_list(const std::string& csv) {
  std::vector<double> out;
  std::istringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      size_t pos = 0;
      out.push_back(std::stod(tok, &pos));
      if (pos != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw ValidationError("bad dB value in list: " + tok);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<SweepRow> reports_to_rows(const Scenario& s, const PointResults& res,
                                             const std::string& id) {
  std::vector<SweepRow> rows;
  for (const auto& [name, rep] : res.by_name) {
    rows.push_back(relaylab::detail::make_row(id, 0.0, s, name, rep, res.relays_swapped));
  }
  return rows;
}

}  // namespace detail

inline int run(const std::vector<std::string>& argv, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  CLI::App app{"achievable rates and cut-set bounds for the half-duplex two-relay network"};
  app.require_subcommand(1);

  // --- rate ---------------------------------------------------------------
  auto* rate = app.add_subcommand("rate", "maximize one scheme (or all) on a scenario");
  std::string rate_scenario, rate_scheme = "all", rate_csv;
  int rate_grid = 9, rate_multistarts = 8;
  std::uint64_t rate_seed = 1;
  rate->add_option("--scenario", rate_scenario, "scenario file")->required();
  rate->add_option("--scheme", rate_scheme,
                   "dpc|bme-succ|bme-back|bme-dpc|ddf|ssrd|all");
  rate->add_option("--grid", rate_grid, "lattice points per dimension");
  rate->add_option("--multistarts", rate_multistarts, "pattern-search restarts");
  rate->add_option("--seed", rate_seed, "deterministic seed");
  rate->add_option("--csv", rate_csv, "also write rows to this CSV file");

  // --- bound --------------------------------------------------------------
  auto* bound = app.add_subcommand("bound", "maximize an outer bound on a scenario");
  std::string bound_scenario, bound_kind = "full";
  double bound_g1 = 1.0, bound_g2 = 1.0;
  int bound_grid = 13;
  std::uint64_t bound_seed = 1;
  bound->add_option("--scenario", bound_scenario, "scenario file")->required();
  bound->add_option("--kind", bound_kind, "full|successive|low-snr-linear");
  bound->add_option("--gamma1", bound_g1, "relay-1 power ratio (linear bound)");
  bound->add_option("--gamma2", bound_g2, "relay-2 power ratio (linear bound)");
  bound->add_option("--grid", bound_grid, "lattice points per dimension");
  bound->add_option("--seed", bound_seed, "deterministic seed");

  // --- sweep --------------------------------------------------------------
  auto* sweep = app.add_subcommand("sweep", "run a configured axis sweep");
  std::string sweep_config, sweep_out, sweep_plot;
  sweep->add_option("--config", sweep_config, "sweep config file")->required();
  sweep->add_option("--out", sweep_out, "CSV destination")->required();
  sweep->add_option("--plot", sweep_plot, "plot-script destination");

  // --- asym ---------------------------------------------------------------
  auto* asym = app.add_subcommand("asym", "asymptotic ratio study over a power grid");
  std::string asym_mode, asym_scenario, asym_list;
  double asym_g1 = 1.0, asym_g2 = 1.0;
  int asym_grid = 9;
  std::uint64_t asym_seed = 1;
  asym->add_option("--mode", asym_mode, "high-snr|low-snr")->required();
  asym->add_option("--scenario", asym_scenario, "scenario file (gains used)")->required();
  asym->add_option("--gamma1", asym_g1, "P1/P0 ratio");
  asym->add_option("--gamma2", asym_g2, "P2/P0 ratio");
  asym->add_option("--p0-db-list", asym_list, "comma-separated P0 grid in dB")->required();
  asym->add_option("--grid", asym_grid, "lattice points per dimension");
  asym->add_option("--seed", asym_seed, "deterministic seed");

  // --- compare ------------------------------------------------------------
  auto* compare = app.add_subcommand("compare", "all schemes and bounds, sorted");
  std::string cmp_scenario;
  int cmp_grid = 9;
  std::uint64_t cmp_seed = 1;
  compare->add_option("--scenario", cmp_scenario, "scenario file")->required();
  compare->add_option("--grid", cmp_grid, "lattice points per dimension");
  compare->add_option("--seed", cmp_seed, "deterministic seed");

  try {
    std::vector<std::string> args(argv.rbegin(), argv.rend());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (rate->parsed()) {
      const auto sf = load_scenario(rate_scenario);
      const Scenario scenario{sf.gains, detail::require_budget(sf)};
      OptimizerConfig cfg;
      cfg.grid_points_per_dim = rate_grid;
      cfg.multistarts = rate_multistarts;
      cfg.seed = rate_seed;

      std::vector<SchemeId> ids;
      if (rate_scheme == "all") {
        ids = {SchemeId::DPC, SchemeId::BME_SUCC, SchemeId::BME_BACK,
               SchemeId::BME_DPC, SchemeId::DDF, SchemeId::SSRD};
      } else if (auto id = scheme_from_name(rate_scheme)) {
        ids = {*id};
      } else {
        err << "unknown scheme: " << rate_scheme << '\n';
        return kExitUsage;
      }

      const auto res = evaluate_point(scenario, ids, {}, cfg);
      if (res.relays_swapped) {
        out << "# relays relabeled (h01 < h02); allocations use the relabeled indices\n";
      }
      out << "scheme      rate_bpcu\n";
      for (const auto& id : ids) {
        const auto& rep = res.by_name.at(scheme_name(id));
        char line[64];
        std::snprintf(line, sizeof line, "%-11s %s\n", scheme_name(id),
                      detail::fmt_rate(rep.total).c_str());
        out << line;
      }
      if (!rate_csv.empty()) {
        write_csv(detail::reports_to_rows(scenario, res, "rate"), rate_csv);
      }
      return kExitOk;
    }

    if (bound->parsed()) {
      const auto sf = load_scenario(bound_scenario);
      const auto kind = bound_from_name(bound_kind);
      if (!kind) {
        err << "unknown bound kind: " << bound_kind << '\n';
        return kExitUsage;
      }
      if (*kind == BoundKind::LOW_SNR_LINEAR) {
        const auto budget = detail::require_budget(sf);
        out << detail::fmt_rate(
               low_snr_linear_bound(sf.gains, bound_g1, bound_g2, budget.p0))
            << '\n';
        return kExitOk;
      }
      const Scenario scenario{sf.gains, detail::require_budget(sf)};
      OptimizerConfig cfg = default_bound_config();
      cfg.grid_points_per_dim = bound_grid;
      cfg.seed = bound_seed;
      const auto rep = *kind == BoundKind::FULL_CUTSET
                           ? cutset_optimize(scenario.gains, scenario.budget, cfg)
                           : successive_cutset_optimize(scenario.gains, scenario.budget, cfg);
      out << detail::fmt_rate(rep.total) << '\n';
      return kExitOk;
    }

    if (sweep->parsed()) {
      const auto cfg = load_sweep_config(sweep_config);
      const auto rows = run_sweep(cfg);
      const size_t bytes = write_csv(rows, sweep_out);
      out << "wrote " << rows.size() << " rows (" << bytes << " bytes) to " << sweep_out
          << '\n';
      if (!sweep_plot.empty()) {
        emit_plot_script(rows, sweep_plot);
        out << "wrote plot script to " << sweep_plot << '\n';
      }
      return kExitOk;
    }

    if (asym->parsed()) {
      const auto sf = load_scenario(asym_scenario);
      AsymptoticScenario scn;
      scn.gains = sf.gains;
      scn.gamma1 = asym_g1;
      scn.gamma2 = asym_g2;
      scn.p0_grid_db = detail::parse_db_list(asym_list);
      OptimizerConfig cfg;
      cfg.grid_points_per_dim = asym_grid;
      cfg.seed = asym_seed;
      OptimizerConfig bcfg = default_bound_config();
      bcfg.seed = asym_seed;

      const bool high = asym_mode == "high-snr";
      if (!high && asym_mode != "low-snr") {
        err << "mode must be high-snr or low-snr\n";
        return kExitUsage;
      }
      const auto rows = high ? high_snr_study(scn, cfg, bcfg)
                             : low_snr_study(scn, cfg, bcfg);
      out << "p0_db scheme_rate bound_rate ratio";
      if (high) out << " t3+t4";
      out << " gap_bits\n";
      for (const auto& r : rows) {
        char line[160];
        if (high) {
          std::snprintf(line, sizeof line, "%g %.9g %.9g %.6f %.6f %.9g\n", r.p0_db,
                        r.scheme_rate, r.bound_rate, r.ratio, *r.t_hat34, r.gap_bits);
        } else {
          std::snprintf(line, sizeof line, "%g %.9g %.9g %.6f %.9g%s\n", r.p0_db,
                        r.scheme_rate, r.bound_rate, r.ratio, r.gap_bits,
                        r.condition_violated ? " (condition violated)" : "");
        }
        out << line;
      }
      return kExitOk;
    }

    if (compare->parsed()) {
      const auto sf = load_scenario(cmp_scenario);
      const Scenario scenario{sf.gains, detail::require_budget(sf)};
      OptimizerConfig cfg;
      cfg.grid_points_per_dim = cmp_grid;
      cfg.seed = cmp_seed;
      OptimizerConfig bcfg = default_bound_config();
      bcfg.seed = cmp_seed;

      const std::vector<SchemeId> ids = {SchemeId::DPC,     SchemeId::BME_SUCC,
                                         SchemeId::BME_BACK, SchemeId::BME_DPC,
                                         SchemeId::DDF,     SchemeId::SSRD};
      const auto res = evaluate_point(
          scenario, ids, {BoundKind::FULL_CUTSET, BoundKind::SUCCESSIVE_CUTSET}, cfg, bcfg);
      if (res.relays_swapped) {
        out << "# relays relabeled (h01 < h02); allocations use the relabeled indices\n";
      }
      const double cutset = res.by_name.at(bound_name(BoundKind::FULL_CUTSET)).total;
      std::vector<std::pair<std::string, double>> table;
      for (const auto& [name, rep] : res.by_name) table.emplace_back(name, rep.total);
      std::stable_sort(table.begin(), table.end(),
                       [](const auto& a, const auto& b) { return a.second > b.second; });
      out << "name               rate_bpcu      ratio_to_bound\n";
      for (const auto& [name, total] : table) {
        char line[96];
        std::snprintf(line, sizeof line, "%-18s %s %.6f\n", name.c_str(),
                      detail::fmt_rate(total).c_str(),
                      cutset > 0.0 ? total / cutset : 0.0);
        out << line;
      }
      return kExitOk;
    }
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const DomainError& e) {
    err << "validation error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const PreconditionError& e) {
    err << "validation error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const AllocationError& e) {
    err << "infeasible: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return kExitUsage;
}

}  // namespace relaylab::cli
