#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <optional>
#include <span>

#include "relaylab/optimizer.hpp"

using namespace relaylab;
using namespace relaylab::opt;

namespace {

Objective quadratic_peak(double c) {
  return [c](std::span<const double> x) -> std::optional<double> {
    return -(x[0] - c) * (x[0] - c);
  };
}

}  // namespace

TEST_CASE("grid_scan enumerates box lattices deterministically") {
  SearchSpace space{{Block::box({0.0}, {1.0})}};
  const auto rows = grid_scan(quadratic_peak(0.3), space, 3);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].first[0] == 0.0);
  CHECK(rows[1].first[0] == 0.5);
  CHECK(rows[2].first[0] == 1.0);
}

TEST_CASE("grid_scan enumerates the simplex lattice") {
  SearchSpace space{{Block::simplex(2, 1.0)}};
  const auto rows = grid_scan(
      [](std::span<const double> x) -> std::optional<double> { return x[0]; }, space, 3);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].first == std::vector<double>{0.0, 1.0});
  CHECK(rows[1].first == std::vector<double>{0.5, 0.5});
  CHECK(rows[2].first == std::vector<double>{1.0, 0.0});
}

TEST_CASE("grid_scan rejects oversized lattices") {
  SearchSpace space{{Block::box(std::vector<double>(10, 0.0), std::vector<double>(10, 1.0))}};
  CHECK_THROWS_AS(grid_scan([](std::span<const double>) -> std::optional<double> { return 0.0; },
                            space, 11),
                  BudgetError);
}

TEST_CASE("maximize finds a smooth interior maximum") {
  SearchSpace space{{Block::box({0.0}, {1.0})}};
  OptimizerConfig cfg;
  const auto best = maximize(quadratic_peak(0.3), space, cfg);
  REQUIRE(best.has_value());
  CHECK(best->point[0] == Catch::Approx(0.3).margin(1e-6));
  CHECK(best->value == Catch::Approx(0.0).margin(1e-10));
}

TEST_CASE("maximize solves the symmetric minimax on the simplex") {
  SearchSpace space{{Block::simplex(2, 1.0)}};
  OptimizerConfig cfg;
  const auto best = maximize(
      [](std::span<const double> x) -> std::optional<double> {
        return std::min(x[0], x[1]);
      },
      space, cfg);
  REQUIRE(best.has_value());
  CHECK(best->value == Catch::Approx(0.5).margin(1e-9));
  CHECK(best->point[0] == Catch::Approx(0.5).margin(1e-6));
}

TEST_CASE("maximize reports an entirely infeasible space") {
  SearchSpace space{{Block::box({0.0}, {1.0})}};
  OptimizerConfig cfg;
  const auto best = maximize(
      [](std::span<const double>) -> std::optional<double> { return std::nullopt; }, space,
      cfg);
  CHECK_FALSE(best.has_value());
}

TEST_CASE("maximize never loses to its own coarse grid") {
  SearchSpace space{{Block::simplex(3, 2.0), Block::box({-1.0}, {1.0})}};
  OptimizerConfig cfg;
  const Objective obj = [](std::span<const double> x) -> std::optional<double> {
    return std::min(x[0] + 0.3 * x[3], std::min(x[1], 2.0 * x[2])) - 0.1 * x[3] * x[3];
  };
  const auto best = maximize(obj, space, cfg);
  REQUIRE(best.has_value());
  const auto oracle = grid_scan_best(obj, space, cfg.grid_points_per_dim);
  REQUIRE(oracle.has_value());
  CHECK(best->value >= oracle->value - 1e-12);
}

TEST_CASE("maximize is deterministic and keeps points on their blocks") {
  SearchSpace space{{Block::simplex(3, 1.5), Block::box({0.0, 0.0}, {1.0, 2.0})}};
  OptimizerConfig cfg;
  cfg.seed = 42;
  cfg.multistarts = 12;  // forces seeded random starts beyond the grid top-k
  const Objective obj = [](std::span<const double> x) -> std::optional<double> {
    if (x[3] > 0.9) return std::nullopt;  // feasibility boundary
    return std::min(x[0], x[1] + x[2]) + 0.25 * x[3] - 0.1 * (x[4] - 0.7) * (x[4] - 0.7);
  };
  const auto a = maximize(obj, space, cfg);
  const auto b = maximize(obj, space, cfg);
  REQUIRE(a.has_value());
  REQUIRE(b.has_value());
  CHECK(a->value == b->value);
  CHECK(a->point == b->point);

  const double mass = a->point[0] + a->point[1] + a->point[2];
  CHECK(mass == Catch::Approx(1.5).margin(1e-12));
  for (int i = 0; i < 3; ++i) CHECK(a->point[i] >= -1e-15);
  CHECK(a->point[3] >= 0.0);
  CHECK(a->point[3] <= 1.0);
  CHECK(a->point[4] >= 0.0);
  CHECK(a->point[4] <= 2.0);
}

TEST_CASE("seed points can rescue a search from a coarse grid") {
  // Narrow spike the default grid cannot see.
  SearchSpace space{{Block::box({0.0}, {1.0})}};
  OptimizerConfig cfg;
  cfg.grid_points_per_dim = 3;
  const double spike = 0.123456;
  const Objective obj = [spike](std::span<const double> x) -> std::optional<double> {
    const double d = std::fabs(x[0] - spike);
    return d < 1e-3 ? 10.0 - d : -d;
  };
  const auto unseeded = maximize(obj, space, cfg);
  const auto seeded = maximize(obj, space, cfg, {{spike}});
  REQUIRE(seeded.has_value());
  CHECK(seeded->value >= 10.0 - 1e-3);
  REQUIRE(unseeded.has_value());
  CHECK(seeded->value > unseeded->value);
}
