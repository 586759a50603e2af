// Achievable-rate evaluators for the half-duplex two-relay network, one per
// coding scheme, plus their parameter spaces and maximizers.
//
// Rate reports decompose the achieved total into the same named sub-rates the
// schedules are built from: R^(1)/R^(2) for the two-slot successive schemes,
// Rp/Rc for the broadcast/coherent schedule, R1..R9 for the four-slot one.
#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "relaylab/kernel.hpp"
#include "relaylab/model.hpp"
#include "relaylab/optimizer.hpp"

namespace relaylab {

enum class SchemeId { DPC, BME_SUCC, BME_BACK, BME_DPC, DDF, SSRD };

inline const char* scheme_name(SchemeId id) {
  switch (id) {
    case SchemeId::DPC: return "dpc";
    case SchemeId::BME_SUCC: return "bme-succ";
    case SchemeId::BME_BACK: return "bme-back";
    case SchemeId::BME_DPC: return "bme-dpc";
    case SchemeId::DDF: return "ddf";
    case SchemeId::SSRD: return "ssrd";
  }
  return "?";
}

inline std::optional<SchemeId> scheme_from_name(const std::string& name) {
  for (SchemeId id : {SchemeId::DPC, SchemeId::BME_SUCC, SchemeId::BME_BACK,
                      SchemeId::BME_DPC, SchemeId::DDF, SchemeId::SSRD}) {
    if (name == scheme_name(id)) return id;
  }
  return std::nullopt;
}

struct PreconditionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

inline double min4(double a, double b, double c, double d) {
  return std::min(std::min(a, b), std::min(c, d));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Interference pre-cancellation, no inter-relay decoding. Each slot carries an
// independent stream; the inter-relay gain never enters.
// ---------------------------------------------------------------------------

namespace detail {

struct DpcTerms {
  double a1, b1, a2, b2;  // a = source->relay leg, b = relay->destination leg
};

inline DpcTerms dpc_terms(const ChannelGains& g, const PowerBudget& p, double t1,
                          double t2, double p01, double p02) {
  return DpcTerms{
      slot_fast(t1, g.h01 * g.h01 * p01),
      slot_fast(t2, g.h13 * g.h13 * p.p1),
      slot_fast(t2, g.h02 * g.h02 * p02),
      slot_fast(t1, g.h23 * g.h23 * p.p2),
  };
}

inline double dpc_rate(const ChannelGains& g, const PowerBudget& p,
                       std::span<const double> x) {
  const DpcTerms t = dpc_terms(g, p, x[0], x[1], x[2], x[3]);
  return std::min(t.a1, t.b1) + std::min(t.a2, t.b2);
}

}  // namespace detail

inline RateReport dpc_eval(const ChannelGains& g, const PowerBudget& p,
                           const DpcAllocation& a) {
  const auto t = detail::dpc_terms(g, p, a.t1, a.t2, a.p0_1, a.p0_2);
  const double r1 = std::min(t.a1, t.b1);
  const double r2 = std::min(t.a2, t.b2);
  RateReport rep;
  rep.total = detail::min4(t.a1 + t.a2, t.a1 + t.b2, t.b1 + t.a2, t.b1 + t.b2);
  rep.components = {{"R^(1)", r1}, {"R^(2)", r2}};
  rep.cuts = {{"src1+src2", t.a1 + t.a2},
              {"src1+rly2", t.a1 + t.b2},
              {"rly1+src2", t.b1 + t.a2},
              {"rly1+rly2", t.b1 + t.b2}};
  rep.alloc = {{"t1", a.t1}, {"t2", a.t2}, {"p0_1", a.p0_1}, {"p0_2", a.p0_2}};
  return rep;
}

// ---------------------------------------------------------------------------
// Inter-relay decoding with bin-index forwarding, successive decoding at the
// destination. theta_i splits each relay's power between its message codeword
// and the superposed bin codeword; alpha_i splits the source power between
// the fresh message and the part aligned with the relayed codeword.
// ---------------------------------------------------------------------------

namespace detail {

struct BmeSuccTerms {
  double side1, side2;  // per-side decode-and-forward chains
  double mac1, mac2;    // joint decoding cuts at each relay
};

inline BmeSuccTerms bme_succ_terms(const ChannelGains& g, const PowerBudget& p,
                                   double t1, double t2, double p01, double p02,
                                   double a1, double a2, double th1, double th2) {
  // Bin index decoded at the destination against the relayed-message part.
  const double bin2 =
      t1 <= 0.0 ? 0.0
                : t1 * c_fast(g.h23 * g.h23 * (1.0 - th2) * p.p2 /
                              (g.h23 * g.h23 * th2 * p.p2 + t1));
  const double bin1 =
      t2 <= 0.0 ? 0.0
                : t2 * c_fast(g.h13 * g.h13 * (1.0 - th1) * p.p1 /
                              (g.h13 * g.h13 * th1 * p.p1 + t2));
  BmeSuccTerms t;
  t.side1 = std::min(slot_fast(t1, g.h01 * g.h01 * a1 * p01),
                     bin2 + slot_fast(t2, g.h13 * g.h13 * th1 * p.p1));
  t.side2 = std::min(slot_fast(t2, g.h02 * g.h02 * a2 * p02),
                     bin1 + slot_fast(t1, g.h23 * g.h23 * th2 * p.p2));
  t.mac1 = slot_fast(t1, g.h01 * g.h01 * p01 + g.h12 * g.h12 * th2 * p.p2 +
                             2.0 * g.h01 * g.h12 *
                                 std::sqrt((1.0 - a1) * th2 * p01 * p.p2));
  t.mac2 = slot_fast(t2, g.h02 * g.h02 * p02 + g.h12 * g.h12 * th1 * p.p1 +
                             2.0 * g.h02 * g.h12 *
                                 std::sqrt((1.0 - a2) * th1 * p02 * p.p1));
  return t;
}

inline double bme_succ_rate(const ChannelGains& g, const PowerBudget& p,
                            std::span<const double> x) {
  const BmeSuccTerms t =
      bme_succ_terms(g, p, x[0], x[1], x[2], x[3], x[4], x[5], x[6], x[7]);
  return std::min(std::min(t.side1 + t.side2, t.mac1), t.mac2);
}

}  // namespace detail

inline RateReport bme_succ_eval(const ChannelGains& g, const PowerBudget& p,
                                const BmeSuccAllocation& a) {
  const auto t = detail::bme_succ_terms(g, p, a.t1, a.t2, a.p0_1, a.p0_2, a.alpha1,
                                        a.alpha2, a.theta1, a.theta2);
  RateReport rep;
  rep.total = std::min(std::min(t.side1 + t.side2, t.mac1), t.mac2);
  rep.components = {{"R^(1)", t.side1}, {"R^(2)", t.side2}};
  rep.cuts = {{"side1+side2", t.side1 + t.side2},
              {"relay1_mac", t.mac1},
              {"relay2_mac", t.mac2}};
  rep.alloc = {{"t1", a.t1},           {"t2", a.t2},
               {"p0_1", a.p0_1},       {"p0_2", a.p0_2},
               {"alpha1", a.alpha1},   {"alpha2", a.alpha2},
               {"theta1", a.theta1},   {"theta2", a.theta2}};
  return rep;
}

// ---------------------------------------------------------------------------
// Inter-relay decoding with backward decoding at the destination. Each relay
// transmits at full power; beta_i is the fraction of slot-i source power on
// the fresh message, the rest rides coherently on the relay codeword.
// ---------------------------------------------------------------------------

namespace detail {

inline std::array<double, 4> bme_back_cuts(const ChannelGains& g, const PowerBudget& p,
                                           double t1, double t2, double p01, double p02,
                                           double b1, double b2) {
  return {
      slot_fast(t1, g.h01 * g.h01 * p01 + g.h12 * g.h12 * p.p2 +
                        2.0 * g.h01 * g.h12 * std::sqrt((1.0 - b1) * p01 * p.p2)),
      slot_fast(t2, g.h02 * g.h02 * p02 + g.h12 * g.h12 * p.p1 +
                        2.0 * g.h02 * g.h12 * std::sqrt((1.0 - b2) * p02 * p.p1)),
      slot_fast(t1, g.h01 * g.h01 * b1 * p01) + slot_fast(t2, g.h02 * g.h02 * b2 * p02),
      slot_fast(t1, g.h23 * g.h23 * p.p2) + slot_fast(t2, g.h13 * g.h13 * p.p1),
  };
}

inline double bme_back_rate(const ChannelGains& g, const PowerBudget& p,
                            std::span<const double> x) {
  const auto c = bme_back_cuts(g, p, x[0], x[1], x[2], x[3], x[4], x[5]);
  return min4(c[0], c[1], c[2], c[3]);
}

}  // namespace detail

inline RateReport bme_back_eval(const ChannelGains& g, const PowerBudget& p,
                                const BmeBackAllocation& a) {
  const auto c =
      detail::bme_back_cuts(g, p, a.t1, a.t2, a.p0_1, a.p0_2, a.beta1, a.beta2);
  RateReport rep;
  rep.total = detail::min4(c[0], c[1], c[2], c[3]);
  rep.cuts = {{"relay1_mac", c[0]},
              {"relay2_mac", c[1]},
              {"fresh_sum", c[2]},
              {"relay_dest_sum", c[3]}};
  rep.components = {{"R^(1)+R^(2)", rep.total}};
  rep.alloc = {{"t1", a.t1},       {"t2", a.t2},   {"p0_1", a.p0_1},
               {"p0_2", a.p0_2},   {"beta1", a.beta1}, {"beta2", a.beta2}};
  return rep;
}

// ---------------------------------------------------------------------------
// Composite: relay 1 decodes relay 2's message and forwards its bin index;
// the source pre-cancels relay 1's interference at relay 2.
// ---------------------------------------------------------------------------

namespace detail {

inline std::array<double, 4> bme_dpc_cuts(const ChannelGains& g, const PowerBudget& p,
                                          double t1, double t2, double p01, double p02,
                                          double alpha) {
  return {
      slot_fast(t1, g.h01 * g.h01 * p01 + g.h12 * g.h12 * p.p2 +
                        2.0 * g.h01 * g.h12 * std::sqrt((1.0 - alpha) * p01 * p.p2)),
      slot_fast(t1, g.h01 * g.h01 * alpha * p01) + slot_fast(t2, g.h02 * g.h02 * p02),
      slot_fast(t1, g.h23 * g.h23 * p.p2) + slot_fast(t2, g.h13 * g.h13 * p.p1),
      slot_fast(t2, g.h02 * g.h02 * p02) + slot_fast(t2, g.h13 * g.h13 * p.p1),
  };
}

inline double bme_dpc_rate(const ChannelGains& g, const PowerBudget& p,
                           std::span<const double> x) {
  const auto c = bme_dpc_cuts(g, p, x[0], x[1], x[2], x[3], x[4]);
  return min4(c[0], c[1], c[2], c[3]);
}

}  // namespace detail

inline RateReport bme_dpc_eval(const ChannelGains& g, const PowerBudget& p,
                               const BmeDpcAllocation& a) {
  const auto c = detail::bme_dpc_cuts(g, p, a.t1, a.t2, a.p0_1, a.p0_2, a.alpha);
  RateReport rep;
  rep.total = detail::min4(c[0], c[1], c[2], c[3]);
  rep.cuts = {{"relay1_mac", c[0]},
              {"fresh_sum", c[1]},
              {"relay_dest_sum", c[2]},
              {"side2_chain", c[3]}};
  rep.components = {{"R^(1)+R^(2)", rep.total}};
  rep.alloc = {{"t1", a.t1},     {"t2", a.t2},
               {"p0_1", a.p0_1}, {"p0_2", a.p0_2},
               {"alpha", a.alpha}};
  return rep;
}

// ---------------------------------------------------------------------------
// Simultaneous relaying: superposed private/common broadcast to the relays in
// slot 3, coherent common-message access in slot 4. Requires h01 >= h02 so
// that relay 2 sees the degraded signal.
// ---------------------------------------------------------------------------

namespace detail {

struct DdfTerms {
  double rp_src;   // private, source -> relay 1
  double rp_rly;   // private, relay 1 -> destination
  double rc_cap;   // common broadcast cap at relay 2
  double sum_cap;  // joint second-hop cap
};

inline DdfTerms ddf_terms(const ChannelGains& g, const PowerBudget& p, double t3,
                          double t4, double p0p, double p0c, double p1p, double p1c) {
  DdfTerms t;
  t.rp_src = slot_fast(t3, g.h01 * g.h01 * p0p);
  t.rp_rly = slot_fast(t4, g.h13 * g.h13 * p1p);
  t.rc_cap = t3 <= 0.0 ? 0.0
                       : t3 * c_fast(g.h02 * g.h02 * p0c /
                                     (t3 + g.h02 * g.h02 * p0p));
  const double amp = g.h13 * std::sqrt(p1c) + g.h23 * std::sqrt(p.p2);
  t.sum_cap = slot_fast(t4, g.h13 * g.h13 * p1p + amp * amp);
  return t;
}

inline double ddf_rate(const ChannelGains& g, const PowerBudget& p,
                       std::span<const double> x) {
  const DdfTerms t = ddf_terms(g, p, x[0], x[1], x[2], x[3], x[4], x[5]);
  const double rp = std::min(t.rp_src, t.rp_rly);
  return std::min(rp + t.rc_cap, t.sum_cap);
}

}  // namespace detail

inline RateReport ddf_eval(const ChannelGains& g, const PowerBudget& p,
                           const DdfAllocation& a) {
  if (g.h01 < g.h02) {
    throw PreconditionError(
        "ddf requires h01 >= h02; relabel the relays (swap_relays) and retry");
  }
  const auto t = detail::ddf_terms(g, p, a.t3, a.t4, a.p0p, a.p0c, a.p1p, a.p1c);
  // Best feasible pair under the caps: private first, common fills the
  // remaining sum-rate headroom, then the private itself is clipped.
  double rp = std::min(t.rp_src, t.rp_rly);
  double rc = t.rc_cap;
  if (rp + rc > t.sum_cap) rc = std::max(0.0, t.sum_cap - rp);
  if (rp > t.sum_cap) rp = t.sum_cap;

  RateReport rep;
  rep.total = std::min(std::min(t.rp_src + t.rc_cap, t.rp_rly + t.rc_cap), t.sum_cap);
  rep.components = {{"Rp", rp}, {"Rc", rc}};
  rep.cuts = {{"private_src+common", t.rp_src + t.rc_cap},
              {"private_rly+common", t.rp_rly + t.rc_cap},
              {"second_hop_sum", t.sum_cap}};
  rep.alloc = {{"t3", a.t3},   {"t4", a.t4},   {"p0p", a.p0p},
               {"p0c", a.p0c}, {"p1p", a.p1p}, {"p1c", a.p1c}};
  return rep;
}

/// Successive-decoding corner of the second-hop region matching the achieved
/// private rate: the smallest relay-1 private power whose clean decode still
/// carries Rp, with the freed power moved to the common codeword.
struct DdfCorner {
  double rp;      // unchanged private rate
  double rc;      // common rate at the corner
  double p1p;     // reduced relay-1 private power
};

inline DdfCorner ddf_corner_decompose(const ChannelGains& g, const PowerBudget& p,
                                      const DdfAllocation& a) {
  const RateReport base = ddf_eval(g, p, a);
  const double rp = base.components[0].second;
  const double cap = slot_term(a.t4, g.h13 * g.h13 * p.p1);
  if (rp > cap) {
    throw PreconditionError("private rate exceeds the full relay-1 second-hop capacity");
  }
  double p1p = detail::invert_slot_power(a.t4, g.h13, rp);
  p1p = std::min(p1p, p.p1);
  const double p1c = p.p1 - p1p;
  const double amp = g.h13 * std::sqrt(p1c) + g.h23 * std::sqrt(p.p2);
  const double rc = a.t4 <= 0.0 ? 0.0
                                : a.t4 * c_gauss(amp * amp /
                                                 (a.t4 + g.h13 * g.h13 * p1p));
  return DdfCorner{rp, rc, p1p};
}

// ---------------------------------------------------------------------------
// Four-slot schedule. R1..R9 are the per-link slot rates; the destination
// decodes the slot-4 access channel successively (common first against all
// private signals, then relay-2's private against relay-1's, then relay-1's
// clean), so R7+R8+R9 telescopes to the joint second-hop rate.
// ---------------------------------------------------------------------------

struct SsrdRates {
  std::array<double, 9> r;      // R1..R9 (r[6],r[7] = clean R7 / layered R8)
  double r8_single;             // relay-2 private at full exclusive access
  double cut_a, cut_b;
  // Constraint slacks (>= 0 when satisfied): lhs <= rhs + tol.
  double slack_common, slack_relay1, slack_relay2;
};

namespace detail {

inline SsrdRates ssrd_rates(const ChannelGains& g, const PowerBudget& p,
                            std::span<const double> x) {
  const double t1 = x[0], t2 = x[1], t3 = x[2], t4 = x[3];
  const double p01 = x[4], p02 = x[5], p0p3 = x[6], p0c3 = x[7];
  const double p12 = x[8], p1p4 = x[9], p1c4 = x[10];
  const double p21 = x[11], p2p4 = x[12], p2c4 = x[13];

  SsrdRates s{};
  auto& r = s.r;
  r[0] = slot_fast(t1, g.h01 * g.h01 * p01);
  r[1] = slot_fast(t1, g.h23 * g.h23 * p21);
  r[2] = slot_fast(t2, g.h13 * g.h13 * p12);
  r[3] = slot_fast(t2, g.h02 * g.h02 * p02);
  r[4] = slot_fast(t3, g.h01 * g.h01 * p0p3);
  r[5] = t3 <= 0.0 ? 0.0
                   : t3 * c_fast(g.h02 * g.h02 * p0c3 /
                                 (t3 + g.h02 * g.h02 * p0p3));
  const double priv_snr = g.h13 * g.h13 * p1p4 + g.h23 * g.h23 * p2p4;
  const double amp = g.h13 * std::sqrt(p1c4) + g.h23 * std::sqrt(p2c4);
  r[6] = slot_fast(t4, g.h13 * g.h13 * p1p4);
  r[7] = t4 <= 0.0 ? 0.0
                   : t4 * c_fast(g.h23 * g.h23 * p2p4 /
                                 (t4 + g.h13 * g.h13 * p1p4));
  r[8] = t4 <= 0.0 ? 0.0 : t4 * c_fast(amp * amp / (t4 + priv_snr));
  s.r8_single = slot_fast(t4, g.h23 * g.h23 * p2p4);

  s.cut_a = r[0] + r[3] + r[4] + r[5];
  s.cut_b = r[1] + r[2] + r[6] + r[7] + r[8];
  s.slack_common = r[5] - r[8];
  s.slack_relay1 = (r[2] + r[6]) - (r[0] + r[4]);
  s.slack_relay2 = (r[1] + s.r8_single) - r[3];
  return s;
}

constexpr double kFeasTol = 1e-12;

inline std::optional<double> ssrd_rate(const ChannelGains& g, const PowerBudget& p,
                                       std::span<const double> x) {
  const SsrdRates s = ssrd_rates(g, p, x);
  if (s.slack_common < -kFeasTol || s.slack_relay1 < -kFeasTol ||
      s.slack_relay2 < -kFeasTol) {
    return std::nullopt;
  }
  return std::min(s.cut_a, s.cut_b);
}

}  // namespace detail

struct SsrdOutcome {
  std::optional<RateReport> report;
  std::string violated;  // non-empty when infeasible

  bool feasible() const { return report.has_value(); }
};

inline SsrdOutcome ssrd_eval(const ChannelGains& g, const PowerBudget& p,
                             const SsrdAllocation& a) {
  if (g.h01 < g.h02) {
    throw PreconditionError(
        "ssrd requires h01 >= h02; relabel the relays (swap_relays) and retry");
  }
  const std::array<double, 14> x = {a.t1,   a.t2,   a.t3,   a.t4,  a.p0_1, a.p0_2, a.p0p3,
                                    a.p0c3, a.p1_2, a.p1p4, a.p1c4, a.p2_1, a.p2p4, a.p2c4};
  const SsrdRates s = detail::ssrd_rates(g, p, x);

  SsrdOutcome out;
  if (s.slack_common < -detail::kFeasTol) {
    out.violated = "R9<=R6";
    return out;
  }
  if (s.slack_relay1 < -detail::kFeasTol) {
    out.violated = "R1+R5<=R3+R7";
    return out;
  }
  if (s.slack_relay2 < -detail::kFeasTol) {
    out.violated = "R4<=R2+R8";
    return out;
  }

  RateReport rep;
  rep.total = std::min(s.cut_a, s.cut_b);
  rep.components = {{"R1", s.r[0]}, {"R2", s.r[1]}, {"R3", s.r[2]},
                    {"R4", s.r[3]}, {"R5", s.r[4]}, {"R6", s.r[5]},
                    {"R7", s.r[6]}, {"R8", s.r[7]}, {"R9", s.r[8]}};
  rep.cuts = {{"source_side", s.cut_a}, {"relay_side", s.cut_b}};
  rep.alloc = {{"t1", a.t1},     {"t2", a.t2},     {"t3", a.t3},     {"t4", a.t4},
               {"p0_1", a.p0_1}, {"p0_2", a.p0_2}, {"p0p3", a.p0p3}, {"p0c3", a.p0c3},
               {"p1_2", a.p1_2}, {"p1p4", a.p1p4}, {"p1c4", a.p1c4}, {"p2_1", a.p2_1},
               {"p2p4", a.p2p4}, {"p2c4", a.p2c4}};
  out.report = std::move(rep);
  return out;
}

// ---------------------------------------------------------------------------
// Parameter spaces and maximizers. Each scheme's decision variables are a
// product of simplices (time shares, power splits) and unit boxes (fractions).
// ---------------------------------------------------------------------------

inline opt::SearchSpace scheme_space(SchemeId id, const PowerBudget& p) {
  using opt::Block;
  opt::SearchSpace s;
  switch (id) {
    case SchemeId::DPC:
      s.blocks = {Block::simplex(2, 1.0), Block::simplex(2, p.p0)};
      break;
    case SchemeId::BME_SUCC:
      s.blocks = {Block::simplex(2, 1.0), Block::simplex(2, p.p0), Block::unit_box(4)};
      break;
    case SchemeId::BME_BACK:
      s.blocks = {Block::simplex(2, 1.0), Block::simplex(2, p.p0), Block::unit_box(2)};
      break;
    case SchemeId::BME_DPC:
      s.blocks = {Block::simplex(2, 1.0), Block::simplex(2, p.p0), Block::unit_box(1)};
      break;
    case SchemeId::DDF:
      s.blocks = {Block::simplex(2, 1.0), Block::simplex(2, p.p0),
                  Block::simplex(2, p.p1)};
      break;
    case SchemeId::SSRD:
      s.blocks = {Block::simplex(4, 1.0), Block::simplex(4, p.p0),
                  Block::simplex(3, p.p1), Block::simplex(3, p.p2)};
      break;
  }
  return s;
}

/// Search-effort defaults per scheme: the four-slot scheme has ~12 free
/// dimensions and trades grid resolution for restarts.
inline OptimizerConfig default_scheme_config(SchemeId id) {
  OptimizerConfig cfg;
  if (id == SchemeId::SSRD) {
    cfg.grid_points_per_dim = 5;
    cfg.multistarts = 32;
  }
  return cfg;
}

namespace detail {

inline opt::Objective scheme_objective(SchemeId id, const ChannelGains& g,
                                       const PowerBudget& p) {
  switch (id) {
    case SchemeId::DPC:
      return [g, p](std::span<const double> x) -> std::optional<double> {
        return dpc_rate(g, p, x);
      };
    case SchemeId::BME_SUCC:
      return [g, p](std::span<const double> x) -> std::optional<double> {
        return bme_succ_rate(g, p, x);
      };
    case SchemeId::BME_BACK:
      return [g, p](std::span<const double> x) -> std::optional<double> {
        return bme_back_rate(g, p, x);
      };
    case SchemeId::BME_DPC:
      return [g, p](std::span<const double> x) -> std::optional<double> {
        return bme_dpc_rate(g, p, x);
      };
    case SchemeId::DDF:
      return [g, p](std::span<const double> x) -> std::optional<double> {
        return ddf_rate(g, p, x);
      };
    case SchemeId::SSRD:
      return [g, p](std::span<const double> x) -> std::optional<double> {
        return ssrd_rate(g, p, x);
      };
  }
  throw ValidationError("unknown scheme");
}

inline RateReport report_at_point(SchemeId id, const ChannelGains& g,
                                  const PowerBudget& p, std::span<const double> x) {
  switch (id) {
    case SchemeId::DPC:
      return dpc_eval(g, p, DpcAllocation(x[0], x[1], x[2], x[3], p.p0));
    case SchemeId::BME_SUCC:
      return bme_succ_eval(
          g, p, BmeSuccAllocation(x[0], x[1], x[2], x[3], p.p0, x[4], x[5], x[6], x[7]));
    case SchemeId::BME_BACK:
      return bme_back_eval(g, p,
                           BmeBackAllocation(x[0], x[1], x[2], x[3], p.p0, x[4], x[5]));
    case SchemeId::BME_DPC:
      return bme_dpc_eval(g, p, BmeDpcAllocation(x[0], x[1], x[2], x[3], p.p0, x[4]));
    case SchemeId::DDF:
      return ddf_eval(g, p,
                      DdfAllocation(x[0], x[1], x[2], x[3], p.p0, x[4], x[5], p.p1));
    case SchemeId::SSRD: {
      auto out = ssrd_eval(g, p, SsrdAllocation(x[0], x[1], x[2], x[3], x[4], x[5], x[6],
                                                x[7], p.p0, x[8], x[9], x[10], p.p1,
                                                x[11], x[12], x[13], p.p2));
      if (!out.feasible()) {
        throw AllocationError("optimizer returned an infeasible schedule: " + out.violated);
      }
      return *out.report;
    }
  }
  throw ValidationError("unknown scheme");
}

}  // namespace detail

/// Maximizes one scheme over its parameter space. Extra start points (from a
/// coarser scheme's optimum, say) join the grid-derived multistarts.
inline RateReport optimize_scheme(SchemeId id, const ChannelGains& g,
                                  const PowerBudget& p, const OptimizerConfig& cfg,
                                  const std::vector<std::vector<double>>& seeds = {}) {
  if ((id == SchemeId::DDF || id == SchemeId::SSRD) && g.h01 < g.h02) {
    throw PreconditionError(
        "this schedule requires h01 >= h02; relabel the relays (swap_relays)");
  }
  const auto space = scheme_space(id, p);
  // Concrete lambdas per scheme keep the search inner loop inlined.
  std::optional<opt::Maximum> best;
  switch (id) {
    case SchemeId::DPC:
      best = opt::maximize(
          [&g, &p](std::span<const double> x) -> std::optional<double> {
            return detail::dpc_rate(g, p, x);
          },
          space, cfg, seeds);
      break;
    case SchemeId::BME_SUCC:
      best = opt::maximize(
          [&g, &p](std::span<const double> x) -> std::optional<double> {
            return detail::bme_succ_rate(g, p, x);
          },
          space, cfg, seeds);
      break;
    case SchemeId::BME_BACK:
      best = opt::maximize(
          [&g, &p](std::span<const double> x) -> std::optional<double> {
            return detail::bme_back_rate(g, p, x);
          },
          space, cfg, seeds);
      break;
    case SchemeId::BME_DPC:
      best = opt::maximize(
          [&g, &p](std::span<const double> x) -> std::optional<double> {
            return detail::bme_dpc_rate(g, p, x);
          },
          space, cfg, seeds);
      break;
    case SchemeId::DDF:
      best = opt::maximize(
          [&g, &p](std::span<const double> x) -> std::optional<double> {
            return detail::ddf_rate(g, p, x);
          },
          space, cfg, seeds);
      break;
    case SchemeId::SSRD:
      best = opt::maximize(
          [&g, &p](std::span<const double> x) { return detail::ssrd_rate(g, p, x); },
          space, cfg, seeds);
      break;
  }
  if (!best) throw AllocationError("no feasible point found");
  return detail::report_at_point(id, g, p, best->point);
}

// ---------------------------------------------------------------------------
// Seed constructions. Each maps an already-optimized schedule into another
// scheme's parameter space without losing rate, so the receiving search
// starts at least as good as the donor.
// ---------------------------------------------------------------------------

namespace detail {

inline double alloc_value(const RateReport& r, const char* key) {
  auto v = r.find(key);
  if (!v) throw ValidationError(std::string("report lacks allocation key ") + key);
  return *v;
}

}  // namespace detail

/// BME-succ optimum -> BME-back start (fresh-message fractions from alphas).
inline std::vector<double> seed_back_from_succ(const RateReport& succ) {
  return {detail::alloc_value(succ, "t1"),     detail::alloc_value(succ, "t2"),
          detail::alloc_value(succ, "p0_1"),   detail::alloc_value(succ, "p0_2"),
          detail::alloc_value(succ, "alpha1"), detail::alloc_value(succ, "alpha2")};
}

/// BME-back optimum -> BME-DPC start, for the given helper orientation.
/// `mirrored` means the search runs on the relay-swapped scenario, whose
/// slot 1 is the original slot 2.
inline std::vector<double> seed_bme_dpc_from_back(const RateReport& back, bool mirrored) {
  const double t1 = detail::alloc_value(back, "t1");
  const double t2 = detail::alloc_value(back, "t2");
  const double p01 = detail::alloc_value(back, "p0_1");
  const double p02 = detail::alloc_value(back, "p0_2");
  const double b1 = detail::alloc_value(back, "beta1");
  const double b2 = detail::alloc_value(back, "beta2");
  if (mirrored) return {t2, t1, p02, p01, b2};
  return {t1, t2, p01, p02, b1};
}

/// DPC optimum -> four-slot start: same two slots, source power trimmed so
/// each stream exactly fits its relay's forwarding rate, surplus parked on
/// the (zero-length) broadcast slot.
inline std::vector<double> seed_ssrd_from_dpc(const ChannelGains& g, const PowerBudget& p,
                                              const RateReport& dpc) {
  const double t1 = detail::alloc_value(dpc, "t1");
  const double t2 = detail::alloc_value(dpc, "t2");
  const double p01 = detail::alloc_value(dpc, "p0_1");
  const double p02 = detail::alloc_value(dpc, "p0_2");
  const double r1 = std::min(slot_term(t1, g.h01 * g.h01 * p01),
                             slot_term(t2, g.h13 * g.h13 * p.p1));
  const double r2 = std::min(slot_term(t2, g.h02 * g.h02 * p02),
                             slot_term(t1, g.h23 * g.h23 * p.p2));
  double q1 = std::min(detail::invert_slot_power(t1, g.h01, r1), p01);
  double q2 = std::min(detail::invert_slot_power(t2, g.h02, r2), p02);
  if (q1 + q2 > p.p0) {
    const double scale = p.p0 / (q1 + q2);
    q1 *= scale;
    q2 *= scale;
  }
  const double rest = std::max(0.0, p.p0 - q1 - q2);
  return {t1, t2, 0.0, 0.0, q1, q2, 0.0, rest, p.p1, 0.0, 0.0, p.p2, 0.0, 0.0};
}

/// DDF optimum -> four-slot start: private powers trimmed to the achieved
/// private rate on both hops, freed power moved to the common codewords, and
/// relay-2 common power shifted to private until the delivered common rate
/// fits under the broadcast cap.
inline std::vector<double> seed_ssrd_from_ddf(const ChannelGains& g, const PowerBudget& p,
                                              const RateReport& ddf) {
  const double t3 = detail::alloc_value(ddf, "t3");
  const double t4 = detail::alloc_value(ddf, "t4");
  const double p0p = detail::alloc_value(ddf, "p0p");
  const double rp = detail::alloc_value(ddf, "Rp");

  double p0p2 = std::min({detail::invert_slot_power(t3, g.h01, rp), p0p, p.p0});
  const double p0c2 = p.p0 - p0p2;
  double p1p2 = std::min(detail::invert_slot_power(t4, g.h13, rp), p.p1);
  const double p1c2 = p.p1 - p1p2;

  const double r6 = t3 <= 0.0 ? 0.0
                              : t3 * c_gauss(g.h02 * g.h02 * p0c2 /
                                             (t3 + g.h02 * g.h02 * p0p2));
  // Delivered common rate when a lam-fraction of BOTH relays' common power is
  // shifted onto their private codewords; strictly decreasing in lam, zero at
  // lam = 1, so bisection always lands under the broadcast cap.
  auto common_rate = [&](double lam) {
    const double p1pl = p1p2 + lam * p1c2, p1cl = (1.0 - lam) * p1c2;
    const double p2pl = lam * p.p2, p2cl = (1.0 - lam) * p.p2;
    const double amp = g.h13 * std::sqrt(p1cl) + g.h23 * std::sqrt(p2cl);
    const double priv = g.h13 * g.h13 * p1pl + g.h23 * g.h23 * p2pl;
    return t4 <= 0.0 ? 0.0 : t4 * c_gauss(amp * amp / (t4 + priv));
  };
  double lam = 0.0;
  if (common_rate(0.0) > r6) {
    double lo = 0.0, hi = 1.0;
    for (int i = 0; i < 200 && hi - lo > 0.0; ++i) {
      const double mid = 0.5 * (lo + hi);
      (common_rate(mid) > r6 ? lo : hi) = mid;
    }
    lam = hi;
  }
  return {0.0,
          0.0,
          t3,
          t4,
          0.0,
          0.0,
          p0p2,
          p0c2,
          0.0,
          p1p2 + lam * p1c2,
          (1.0 - lam) * p1c2,
          0.0,
          lam * p.p2,
          (1.0 - lam) * p.p2};
}

/// One optimizer call per requested scheme, chaining the seed constructions:
/// the orderings the schemes provably obey become search warm starts. For
/// the composite scheme both helper orientations are searched and the better
/// one reported (alloc gains a `binning_relay` entry; a mirrored winner's
/// slot labels follow the swapped scenario).
struct SchemeOptimum {
  RateReport report;
  bool mirrored = false;  // BME-DPC solved on the relay-swapped scenario
};

inline SchemeOptimum optimize_bme_dpc(const ChannelGains& g, const PowerBudget& p,
                                      const OptimizerConfig& cfg,
                                      const std::optional<RateReport>& back_opt = {}) {
  std::vector<std::vector<double>> seeds1, seeds2;
  if (back_opt) {
    seeds1.push_back(seed_bme_dpc_from_back(*back_opt, false));
    seeds2.push_back(seed_bme_dpc_from_back(*back_opt, true));
  }
  RateReport direct = optimize_scheme(SchemeId::BME_DPC, g, p, cfg, seeds1);
  const Scenario sw = swap_relays(Scenario{g, p});
  RateReport mirror = optimize_scheme(SchemeId::BME_DPC, sw.gains, sw.budget, cfg, seeds2);

  SchemeOptimum out;
  out.mirrored = mirror.total > direct.total;
  out.report = out.mirrored ? std::move(mirror) : std::move(direct);
  out.report.alloc.emplace_back("binning_relay", out.mirrored ? 2.0 : 1.0);
  return out;
}

}  // namespace relaylab
