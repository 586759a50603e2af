// Shared deterministic generators for the test suites.
#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "relaylab/model.hpp"

namespace testgen {

// Uniform in [0,1) from raw engine output; distribution-class-free so the
// stream is identical across standard library implementations.
inline double unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double log_uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo * std::exp(unit(rng) * std::log(hi / lo));
}

inline relaylab::Scenario random_scenario(std::mt19937_64& rng) {
  relaylab::ChannelGains g;
  g.h01 = log_uniform(rng, 0.1, 10.0);
  g.h02 = log_uniform(rng, 0.1, 10.0);
  g.h12 = log_uniform(rng, 0.1, 10.0);
  g.h13 = log_uniform(rng, 0.1, 10.0);
  g.h23 = log_uniform(rng, 0.1, 10.0);
  relaylab::PowerBudget p;
  p.p0 = relaylab::db_to_linear(-10.0 + 40.0 * unit(rng));
  p.p1 = relaylab::db_to_linear(-10.0 + 40.0 * unit(rng));
  p.p2 = relaylab::db_to_linear(-10.0 + 40.0 * unit(rng));
  return {g, p};
}

inline relaylab::Scenario random_symmetric_scenario(std::mt19937_64& rng) {
  relaylab::Scenario s = random_scenario(rng);
  s.gains.h02 = s.gains.h01;
  s.gains.h23 = s.gains.h13;
  s.budget.p2 = s.budget.p1;
  return s;
}

// Random split of `total` into n non-negative parts.
inline std::vector<double> random_split(std::mt19937_64& rng, int n, double total) {
  std::vector<double> w(n);
  double sum = 0.0;
  for (auto& x : w) {
    x = unit(rng) + 1e-9;
    sum += x;
  }
  double acc = 0.0;
  for (int i = 0; i + 1 < n; ++i) {
    w[i] = w[i] / sum * total;
    acc += w[i];
  }
  w[n - 1] = total - acc;
  return w;
}

}  // namespace testgen
