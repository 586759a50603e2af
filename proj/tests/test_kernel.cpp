#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "relaylab/kernel.hpp"

using namespace relaylab;

TEST_CASE("c_gauss known values") {
  CHECK(c_gauss(0.0) == 0.0);
  CHECK(c_gauss(1.0) == Catch::Approx(0.5).margin(1e-15));
  CHECK(c_gauss(3.0) == Catch::Approx(1.0).margin(1e-15));
}

TEST_CASE("c_gauss rejects bad inputs") {
  CHECK_THROWS_AS(c_gauss(-1e-9), DomainError);
  CHECK_THROWS_AS(c_gauss(std::nan("")), DomainError);
  CHECK_THROWS_AS(c_gauss(std::numeric_limits<double>::infinity()), DomainError);
}

TEST_CASE("c_gauss is strictly increasing") {
  std::mt19937_64 rng(7);
  auto unit = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  for (int i = 0; i < 200; ++i) {
    const double x = unit() * 100.0;
    const double y = x + 1e-9 + unit() * 100.0;
    CHECK(c_gauss(x) < c_gauss(y));
  }
}

TEST_CASE("slot_term known values and limits") {
  CHECK(slot_term(0.0, 5.0) == 0.0);
  CHECK(slot_term(1.0, 3.0) == Catch::Approx(1.0).margin(1e-15));
  CHECK(slot_term(0.5, 1.5) == Catch::Approx(0.5).margin(1e-15));
  CHECK(slot_term(0.7, 0.0) == 0.0);
  CHECK_THROWS_AS(slot_term(-0.1, 1.0), DomainError);
  CHECK_THROWS_AS(slot_term(1.1, 1.0), DomainError);
}

TEST_CASE("slot_term vanishes continuously as t -> 0") {
  for (double s : {1e-3, 1.0, 1e3, 1e6}) {
    CHECK(slot_term(1e-9, s) < 1e-6);
  }
}

TEST_CASE("slot_term is concave in (t, s)") {
  std::mt19937_64 rng(11);
  auto unit = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  for (int i = 0; i < 500; ++i) {
    const double t1 = unit(), t2 = unit();
    const double s1 = unit() * 50.0, s2 = unit() * 50.0;
    const double mid = slot_term(0.5 * (t1 + t2), 0.5 * (s1 + s2));
    const double avg = 0.5 * (slot_term(t1, s1) + slot_term(t2, s2));
    CHECK(mid >= avg - 1e-12);
  }
}

TEST_CASE("coherent_snr") {
  CHECK(coherent_snr(1.0, 0.25, 1.0, 0.25) == Catch::Approx(1.0).margin(1e-15));
  CHECK(coherent_snr(3.0, 0.0, 7.0, 0.0) == 0.0);
  CHECK(coherent_snr(2.0, 1.0, 0.0, 5.0) == Catch::Approx(4.0).margin(1e-15));
  CHECK_THROWS_AS(coherent_snr(-1.0, 1.0, 1.0, 1.0), DomainError);
}

TEST_CASE("coherent combining never hurts either branch") {
  std::mt19937_64 rng(13);
  auto unit = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  for (int i = 0; i < 300; ++i) {
    const double g1 = unit() * 5, p1 = unit() * 10, g2 = unit() * 5, p2 = unit() * 10;
    const double c = coherent_snr(g1, p1, g2, p2);
    CHECK(c >= g1 * g1 * p1 - 1e-12);
    CHECK(c >= g2 * g2 * p2 - 1e-12);
  }
}

TEST_CASE("slot power inversion round-trips") {
  std::mt19937_64 rng(17);
  auto unit = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  for (int i = 0; i < 200; ++i) {
    const double t = 0.05 + 0.95 * unit();
    const double g = 0.1 + 5.0 * unit();
    const double p = unit() * 20.0;
    const double r = slot_term(t, g * g * p);
    const double p2 = detail::invert_slot_power(t, g, r);
    CHECK(p2 == Catch::Approx(p).epsilon(1e-12).margin(1e-13));
  }
}
