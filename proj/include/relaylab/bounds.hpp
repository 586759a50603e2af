// Cut-set outer bounds: the four-state Gaussian bound with full transmit
// cooperation per cut, its two-slot restriction, and the linear low-power cap.
#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "relaylab/kernel.hpp"
#include "relaylab/model.hpp"
#include "relaylab/optimizer.hpp"
#include "relaylab/schemes.hpp"

namespace relaylab {

enum class BoundKind { FULL_CUTSET, SUCCESSIVE_CUTSET, LOW_SNR_LINEAR };

inline const char* bound_name(BoundKind k) {
  switch (k) {
    case BoundKind::FULL_CUTSET: return "cutset";
    case BoundKind::SUCCESSIVE_CUTSET: return "successive-cutset";
    case BoundKind::LOW_SNR_LINEAR: return "low-snr-linear";
  }
  return "?";
}

inline std::optional<BoundKind> bound_from_name(const std::string& name) {
  for (BoundKind k : {BoundKind::FULL_CUTSET, BoundKind::SUCCESSIVE_CUTSET,
                      BoundKind::LOW_SNR_LINEAR}) {
    if (name == bound_name(k)) return k;
  }
  if (name == "full") return BoundKind::FULL_CUTSET;
  if (name == "successive") return BoundKind::SUCCESSIVE_CUTSET;
  return std::nullopt;
}

namespace detail {

// x = [t1,t2,t3,t4, p0_1,p0_2,p0_3, p1_2,p1_4, p2_1,p2_4]
inline std::array<double, 4> cutset_cuts(const ChannelGains& g, const PowerBudget&,
                                         std::span<const double> x) {
  const double t1 = x[0], t2 = x[1], t3 = x[2], t4 = x[3];
  const double p01 = x[4], p02 = x[5], p03 = x[6];
  const double p12 = x[7], p14 = x[8], p21 = x[9], p24 = x[10];

  const double h01s = g.h01 * g.h01, h02s = g.h02 * g.h02, h12s = g.h12 * g.h12;
  const double h13s = g.h13 * g.h13, h23s = g.h23 * g.h23;

  const double cut1 = slot_fast(t1, h01s * p01) + slot_fast(t2, h02s * p02) +
                      slot_fast(t3, (h01s + h02s) * p03);

  // Receiver-side cooperation folds the two observations of one transmission
  // into a single log with a power-product term.
  const double cut2 =
      slot_fast2(t2,
                 h02s * p02 + (h12s + h13s) * p12 +
                     2.0 * g.h02 * g.h12 * std::sqrt(p02 * p12),
                 h02s * h13s * p02 * p12) +
      slot_fast(t3, h02s * p03) + slot_fast(t4, h13s * p14);

  const double cut3 =
      slot_fast2(t1,
                 h01s * p01 + (h12s + h23s) * p21 +
                     2.0 * g.h01 * g.h12 * std::sqrt(p01 * p21),
                 h01s * h23s * p01 * p21) +
      slot_fast(t3, h01s * p03) + slot_fast(t4, h23s * p24);

  const double cut4 =
      slot_fast(t1, h23s * p21) + slot_fast(t2, h13s * p12) +
      slot_fast(t4, h13s * p14 + h23s * p24 + 2.0 * g.h13 * g.h23 * std::sqrt(p14 * p24));

  return {cut1, cut2, cut3, cut4};
}

inline double cutset_rate(const ChannelGains& g, const PowerBudget& p,
                          std::span<const double> x) {
  const auto c = cutset_cuts(g, p, x);
  return min4(c[0], c[1], c[2], c[3]);
}

}  // namespace detail

inline RateReport cutset_eval(const ChannelGains& g, const PowerBudget& p,
                              const BoundAllocation& a) {
  const std::array<double, 11> x = {a.t1,   a.t2,   a.t3,   a.t4,  a.p0_1, a.p0_2,
                                    a.p0_3, a.p1_2, a.p1_4, a.p2_1, a.p2_4};
  const auto c = detail::cutset_cuts(g, p, x);
  RateReport rep;
  rep.total = detail::min4(c[0], c[1], c[2], c[3]);
  rep.cuts = {{"source_bc", c[0]},
              {"src_rly1_coop", c[1]},
              {"src_rly2_coop", c[2]},
              {"dest_mac", c[3]}};
  rep.alloc = {{"t1", a.t1},     {"t2", a.t2},     {"t3", a.t3},     {"t4", a.t4},
               {"p0_1", a.p0_1}, {"p0_2", a.p0_2}, {"p0_3", a.p0_3},
               {"p1_2", a.p1_2}, {"p1_4", a.p1_4}, {"p2_1", a.p2_1}, {"p2_4", a.p2_4}};
  return rep;
}

inline opt::SearchSpace bound_space(const PowerBudget& p) {
  using opt::Block;
  opt::SearchSpace s;
  s.blocks = {Block::simplex(4, 1.0), Block::simplex(3, p.p0), Block::simplex(2, p.p1),
              Block::simplex(2, p.p2)};
  return s;
}

/// A loosely maximized bound would poison every dominance claim, so the
/// bound search defaults to a finer grid than the schemes use.
inline OptimizerConfig default_bound_config() {
  OptimizerConfig cfg;
  cfg.grid_points_per_dim = 13;
  cfg.multistarts = 8;
  return cfg;
}

inline RateReport cutset_optimize(const ChannelGains& g, const PowerBudget& p,
                                  const OptimizerConfig& cfg,
                                  const std::vector<std::vector<double>>& seeds = {}) {
  const auto space = bound_space(p);
  const auto obj = [g, p](std::span<const double> x) -> std::optional<double> {
    return detail::cutset_rate(g, p, x);
  };
  const auto best = opt::maximize(obj, space, cfg, seeds);
  if (!best) throw AllocationError("no feasible point found");
  const auto& x = best->point;
  return cutset_eval(g, p,
                     BoundAllocation(x[0], x[1], x[2], x[3], x[4], x[5], x[6], p.p0,
                                     x[7], x[8], p.p1, x[9], x[10], p.p2));
}

/// The bound restricted to the two alternating-relay slots: t3 = t4 = 0 and
/// no power on the disabled slots.
inline RateReport successive_cutset_optimize(
    const ChannelGains& g, const PowerBudget& p, const OptimizerConfig& cfg,
    const std::vector<std::vector<double>>& seeds = {}) {
  using opt::Block;
  opt::SearchSpace space;
  space.blocks = {Block::simplex(2, 1.0), Block::simplex(2, p.p0)};
  auto lift = [&p](std::span<const double> x) {
    return std::array<double, 11>{x[0], x[1], 0.0, 0.0, x[2], x[3], 0.0,
                                  p.p1, 0.0,  p.p2, 0.0};
  };
  const auto obj = [g, p, lift](std::span<const double> x) -> std::optional<double> {
    const auto full = lift(x);
    return detail::cutset_rate(g, p, full);
  };
  const auto best = opt::maximize(obj, space, cfg, seeds);
  if (!best) throw AllocationError("no feasible point found");
  const auto full = lift(best->point);
  return cutset_eval(g, p,
                     BoundAllocation(full[0], full[1], full[2], full[3], full[4], full[5],
                                     full[6], p.p0, full[7], full[8], p.p1, full[9],
                                     full[10], p.p2));
}

/// Low-power cap on the bound: the coherent destination cut linearized,
/// in bits, with relay powers tied to the source power by gamma ratios.
inline double low_snr_linear_bound(const ChannelGains& g, double gamma1, double gamma2,
                                   double p0) {
  detail::require_finite_nonneg(gamma1, "gamma1");
  detail::require_finite_nonneg(gamma2, "gamma2");
  detail::require_finite_nonneg(p0, "p0");
  const double amp = g.h13 * std::sqrt(gamma1) + g.h23 * std::sqrt(gamma2);
  return amp * amp * p0 / (2.0 * M_LN2);
}

// ---------------------------------------------------------------------------
// Bound-space warm starts derived from scheme optima. Each embedded point's
// every cut dominates the donor's rate, so a seeded bound search can never
// sit below the schemes it must dominate.
// ---------------------------------------------------------------------------

/// Two-slot schemes (DPC and the BME family) share one embedding.
inline std::vector<double> seed_bound_from_two_slot(const PowerBudget& p,
                                                    const RateReport& rep) {
  const double t1 = detail::alloc_value(rep, "t1");
  const double t2 = detail::alloc_value(rep, "t2");
  const double p01 = detail::alloc_value(rep, "p0_1");
  const double p02 = detail::alloc_value(rep, "p0_2");
  return {t1, t2, 0.0, 0.0, p01, p02, 0.0, p.p1, 0.0, p.p2, 0.0};
}

inline std::vector<double> seed_bound_from_ddf(const PowerBudget& p,
                                               const RateReport& rep) {
  const double t3 = detail::alloc_value(rep, "t3");
  const double t4 = detail::alloc_value(rep, "t4");
  return {0.0, 0.0, t3, t4, 0.0, 0.0, p.p0, 0.0, p.p1, 0.0, p.p2};
}

inline std::vector<double> seed_bound_from_ssrd(const PowerBudget& p,
                                                const RateReport& rep) {
  const double t1 = detail::alloc_value(rep, "t1");
  const double t2 = detail::alloc_value(rep, "t2");
  const double t3 = detail::alloc_value(rep, "t3");
  const double t4 = detail::alloc_value(rep, "t4");
  const double p01 = detail::alloc_value(rep, "p0_1");
  const double p02 = detail::alloc_value(rep, "p0_2");
  const double p03 = detail::alloc_value(rep, "p0p3") + detail::alloc_value(rep, "p0c3");
  const double p12 = detail::alloc_value(rep, "p1_2");
  const double p14 = detail::alloc_value(rep, "p1p4") + detail::alloc_value(rep, "p1c4");
  const double p21 = detail::alloc_value(rep, "p2_1");
  const double p24 = detail::alloc_value(rep, "p2p4") + detail::alloc_value(rep, "p2c4");
  return {t1, t2, t3, t4, p01, p02, p03, p12, p14, p21, p24};
}

/// Restricted-bound warm start from a two-slot scheme optimum.
inline std::vector<double> seed_successive_bound(const RateReport& rep) {
  return {detail::alloc_value(rep, "t1"), detail::alloc_value(rep, "t2"),
          detail::alloc_value(rep, "p0_1"), detail::alloc_value(rep, "p0_2")};
}

}  // namespace relaylab
