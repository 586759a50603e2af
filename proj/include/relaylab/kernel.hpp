// Scalar capacity primitives shared by every rate expression and bound.
#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace relaylab {

struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

namespace detail {
inline void require_finite_nonneg(double x, const char* what) {
  if (!(x >= 0.0) || !std::isfinite(x)) {
    throw DomainError(std::string(what) + " must be finite and non-negative");
  }
}
}  // namespace detail

/// Capacity of a real AWGN channel at the given SNR, in bits per channel use.
inline double c_gauss(double snr) {
  detail::require_finite_nonneg(snr, "snr");
  // log1p keeps precision at the small SNRs the low-power studies probe.
  return 0.5 * std::log1p(snr) / M_LN2;
}

/// Time-shared capacity term t*C(s/t). Continuous limit: 0 at t=0.
inline double slot_term(double t, double s) {
  if (!(t >= 0.0) || !(t <= 1.0) || !std::isfinite(t)) {
    throw DomainError("time fraction must lie in [0,1]");
  }
  detail::require_finite_nonneg(s, "snr numerator");
  if (t == 0.0 || s == 0.0) return 0.0;
  return t * c_gauss(s / t);
}

/// Received power of two amplitude-aligned transmissions: (g1*sqrt(p1) + g2*sqrt(p2))^2.
inline double coherent_snr(double g1, double p1, double g2, double p2) {
  detail::require_finite_nonneg(g1, "g1");
  detail::require_finite_nonneg(p1, "p1");
  detail::require_finite_nonneg(g2, "g2");
  detail::require_finite_nonneg(p2, "p2");
  const double amp = g1 * std::sqrt(p1) + g2 * std::sqrt(p2);
  return amp * amp;
}

namespace detail {

// Unchecked fast paths for optimizer inner loops. Same formulas as the
// public functions; callers guarantee the domain.
inline double c_fast(double snr) { return 0.5 * std::log1p(snr) / M_LN2; }

inline double slot_fast(double t, double s) {
  if (t <= 0.0 || s <= 0.0) return 0.0;
  return t * c_fast(s / t);
}

// t*C(a/t + b/t^2) with the same continuous limit at t=0. Used by the
// cut-set expressions whose log argument carries a power-product term.
inline double slot_fast2(double t, double a, double b) {
  if (t <= 0.0) return 0.0;
  const double arg = a / t + b / (t * t);
  if (arg <= 0.0) return 0.0;
  return t * c_fast(arg);
}

// Inverse of slot_term in the power argument: smallest p with
// slot_term(t, g^2*p) == r. Exact closed form.
inline double invert_slot_power(double t, double g, double r) {
  if (r <= 0.0) return 0.0;
  if (t <= 0.0 || g <= 0.0) return 0.0;  // unreachable rate; callers check
  return t * std::expm1(2.0 * r / t * M_LN2) / (g * g);
}

}  // namespace detail

}  // namespace relaylab
