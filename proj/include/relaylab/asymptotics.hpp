// Numerical studies of the two capacity-approach regimes: the alternating
// two-slot scheme at high power and the coherent simultaneous scheme at low
// power, each measured against the tightest available outer bound.
#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "relaylab/bounds.hpp"
#include "relaylab/model.hpp"
#include "relaylab/schemes.hpp"

namespace relaylab {

/// Relay powers tied to the source power: P1 = gamma1*P0, P2 = gamma2*P0.
struct AsymptoticScenario {
  ChannelGains gains;
  double gamma1 = 1.0;
  double gamma2 = 1.0;
  std::vector<double> p0_grid_db;
};

struct StudyRow {
  double p0_db = 0.0;
  double scheme_rate = 0.0;
  double bound_rate = 0.0;
  double ratio = 0.0;                    // scheme/bound when bound > 0
  std::optional<double> t_hat34;         // bound-optimal t3+t4 (high-power study)
  double gap_bits = 0.0;                 // bound - scheme
  bool condition_violated = false;       // low-power premise failed
  std::optional<double> all_common_rate; // fixed half/half all-common schedule
};

/// Low-power optimality premise on the channel coefficients.
inline bool low_snr_condition(const ChannelGains& g, double gamma1, double gamma2) {
  detail::require_finite_nonneg(gamma1, "gamma1");
  detail::require_finite_nonneg(gamma2, "gamma2");
  const double amp = g.h13 * std::sqrt(gamma1) + g.h23 * std::sqrt(gamma2);
  return amp * amp <= std::min(g.h01 * g.h01, g.h02 * g.h02);
}

/// Rate of the fixed half/half schedule carrying only the common message.
inline double ddf_all_common_rate(const ChannelGains& g, const PowerBudget& p) {
  return ddf_eval(g, p, DdfAllocation(0.5, 0.5, 0.0, p.p0, p.p0, 0.0, p.p1, p.p1)).total;
}

namespace detail {

inline PowerBudget tied_budget(const AsymptoticScenario& s, double p0_db) {
  const double p0 = db_to_linear(p0_db);
  return PowerBudget{p0, s.gamma1 * p0, s.gamma2 * p0};
}

inline void check_grid(const AsymptoticScenario& s) {
  for (size_t i = 1; i < s.p0_grid_db.size(); ++i) {
    if (!(s.p0_grid_db[i - 1] < s.p0_grid_db[i])) {
      throw ValidationError("p0 grid must be strictly ascending");
    }
  }
}

}  // namespace detail

/// Per grid point: best simultaneous-scheme rate vs the tighter of the
/// maximized cut-set bound and the linear low-power cap.
inline std::vector<StudyRow> low_snr_study(const AsymptoticScenario& scn,
                                           const OptimizerConfig& scheme_cfg,
                                           const OptimizerConfig& bound_cfg) {
  detail::check_grid(scn);
  const bool cond = low_snr_condition(scn.gains, scn.gamma1, scn.gamma2);
  std::vector<StudyRow> rows;
  for (double p0_db : scn.p0_grid_db) {
    const PowerBudget budget = detail::tied_budget(scn, p0_db);
    const Scenario s = validate_scenario(scn.gains, budget);

    // The all-common point sits on every odd grid, but seed it anyway.
    const std::vector<double> all_common = {0.5, 0.5, 0.0, budget.p0, 0.0, budget.p1};
    const RateReport ddf =
        optimize_scheme(SchemeId::DDF, s.gains, s.budget, scheme_cfg, {all_common});

    const RateReport cutset = cutset_optimize(s.gains, s.budget, bound_cfg,
                                              {seed_bound_from_ddf(s.budget, ddf)});
    const double linear =
        low_snr_linear_bound(s.gains, scn.gamma1, scn.gamma2, budget.p0);
    const double bound = std::min(cutset.total, linear);

    StudyRow row;
    row.p0_db = p0_db;
    row.scheme_rate = ddf.total;
    row.bound_rate = bound;
    row.ratio = bound > 0.0 ? ddf.total / bound : 0.0;
    row.gap_bits = bound - ddf.total;
    row.condition_violated = !cond;
    row.all_common_rate = ddf_all_common_rate(s.gains, s.budget);
    rows.push_back(row);
  }
  return rows;
}

/// Per grid point: best two-slot scheme rate vs the maximized cut-set bound,
/// plus the bound-optimal share of the simultaneous slots.
inline std::vector<StudyRow> high_snr_study(const AsymptoticScenario& scn,
                                            const OptimizerConfig& scheme_cfg,
                                            const OptimizerConfig& bound_cfg) {
  detail::check_grid(scn);
  std::vector<StudyRow> rows;
  for (double p0_db : scn.p0_grid_db) {
    const PowerBudget budget = detail::tied_budget(scn, p0_db);
    const Scenario s = validate_scenario(scn.gains, budget);

    const RateReport dpc = optimize_scheme(SchemeId::DPC, s.gains, s.budget, scheme_cfg);
    const RateReport cutset = cutset_optimize(s.gains, s.budget, bound_cfg,
                                              {seed_bound_from_two_slot(s.budget, dpc)});

    StudyRow row;
    row.p0_db = p0_db;
    row.scheme_rate = dpc.total;
    row.bound_rate = cutset.total;
    row.ratio = cutset.total > 0.0 ? dpc.total / cutset.total : 0.0;
    row.t_hat34 = *cutset.find("t3") + *cutset.find("t4");
    row.gap_bits = cutset.total - dpc.total;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace relaylab
