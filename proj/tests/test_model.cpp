#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "relaylab/model.hpp"

using namespace relaylab;

TEST_CASE("validate_scenario accepts well-formed input") {
  ChannelGains g{1, 1, 1, 1, 1};
  PowerBudget p{1, 1, 1};
  CHECK_NOTHROW(validate_scenario(g, p));
}

TEST_CASE("validate_scenario names the offending field") {
  ChannelGains g{1, 1, 1, 1, 1};
  PowerBudget p{1, 1, 1};
  g.h01 = -1.0;
  CHECK_THROWS_WITH(validate_scenario(g, p), Catch::Matchers::ContainsSubstring("h01 negative"));
  g.h01 = 1.0;
  p.p0 = std::nan("");
  CHECK_THROWS_WITH(validate_scenario(g, p), Catch::Matchers::ContainsSubstring("p0 not finite"));
}

TEST_CASE("allocation constructors enforce the budget equalities") {
  CHECK_NOTHROW(DpcAllocation(0.5, 0.5, 1.5, 1.5, 3.0));
  CHECK_THROWS_AS(DpcAllocation(0.5, 0.6, 1.5, 1.5, 3.0), AllocationError);
  CHECK_THROWS_AS(DpcAllocation(0.5, 0.5, 1.5, 1.4, 3.0), AllocationError);
  CHECK_THROWS_AS(DpcAllocation(0.5, 0.5, -0.1, 3.1, 3.0), AllocationError);
  // Scaled splits of large budgets stay constructible.
  const double big = 1e8;
  CHECK_NOTHROW(DpcAllocation(0.5, 0.5, big * 0.3, big * 0.7, big));
  CHECK_THROWS_AS(BmeBackAllocation(0.5, 0.5, 0.5, 0.5, 1.0, 1.2, 0.5), AllocationError);
  CHECK_THROWS_AS(
      SsrdAllocation(0.3, 0.3, 0.3, 0.2, 1, 1, 1, 1, 4, 1, 1, 1, 3, 1, 1, 1, 3),
      AllocationError);
}

TEST_CASE("swap_relays exchanges the relay-indexed quantities") {
  Scenario s{{1, 2, 3, 4, 5}, {6, 7, 8}};
  Scenario w = swap_relays(s);
  CHECK(w.gains.h01 == 2);
  CHECK(w.gains.h02 == 1);
  CHECK(w.gains.h12 == 3);
  CHECK(w.gains.h13 == 5);
  CHECK(w.gains.h23 == 4);
  CHECK(w.budget.p0 == 6);
  CHECK(w.budget.p1 == 8);
  CHECK(w.budget.p2 == 7);
}

TEST_CASE("scenario file parsing") {
  SECTION("linear powers") {
    std::istringstream in(
        "# comment\n"
        "h01 = 1\nh02 = 0.5\nh12 = 2\nh13 = 1\nh23 = 1\n"
        "p0 = 3\np1 = 1.5\np2 = 1.5\n");
    const auto sf = parse_scenario(in);
    REQUIRE(sf.budget.has_value());
    CHECK(sf.gains.h02 == 0.5);
    CHECK(sf.budget->p0 == 3.0);
  }
  SECTION("dB powers convert once") {
    std::istringstream in(
        "h01 = 1\nh02 = 1\nh12 = 1\nh13 = 1\nh23 = 1\n"
        "p0_db = 10\np1_db = 0\np2_db = -10\n");
    const auto sf = parse_scenario(in);
    REQUIRE(sf.budget.has_value());
    CHECK(sf.budget->p0 == Catch::Approx(10.0));
    CHECK(sf.budget->p1 == Catch::Approx(1.0));
    CHECK(sf.budget->p2 == Catch::Approx(0.1));
  }
  SECTION("gains-only file") {
    std::istringstream in("h01 = 1\nh02 = 1\nh12 = 1\nh13 = 1\nh23 = 1\n");
    const auto sf = parse_scenario(in);
    CHECK_FALSE(sf.budget.has_value());
  }
  SECTION("duplicate key") {
    std::istringstream in(
        "h01 = 1\nh01 = 2\nh02 = 1\nh12 = 1\nh13 = 1\nh23 = 1\np0 = 1\np1 = 1\np2 = 1\n");
    CHECK_THROWS_WITH(parse_scenario(in), Catch::Matchers::ContainsSubstring("duplicate key h01"));
  }
  SECTION("conflicting linear and dB power") {
    std::istringstream in(
        "h01 = 1\nh02 = 1\nh12 = 1\nh13 = 1\nh23 = 1\n"
        "p0 = 1\np0_db = 0\np1 = 1\np2 = 1\n");
    CHECK_THROWS_WITH(parse_scenario(in),
                      Catch::Matchers::ContainsSubstring("conflicting keys p0 and p0_db"));
  }
  SECTION("negative gain rejected") {
    std::istringstream in(
        "h01 = -1\nh02 = 1\nh12 = 1\nh13 = 1\nh23 = 1\np0 = 1\np1 = 1\np2 = 1\n");
    CHECK_THROWS_WITH(parse_scenario(in), Catch::Matchers::ContainsSubstring("h01 negative"));
  }
  SECTION("unknown key rejected") {
    std::istringstream in(
        "h01 = 1\nh02 = 1\nh12 = 1\nh13 = 1\nh23 = 1\np0 = 1\np1 = 1\np2 = 1\nbogus = 1\n");
    CHECK_THROWS_WITH(parse_scenario(in), Catch::Matchers::ContainsSubstring("unknown key bogus"));
  }
}

TEST_CASE("dB conversions") {
  CHECK(db_to_linear(0.0) == Catch::Approx(1.0));
  CHECK(db_to_linear(10.0) == Catch::Approx(10.0));
  CHECK(linear_to_db(db_to_linear(-7.3)) == Catch::Approx(-7.3).margin(1e-12));
}
