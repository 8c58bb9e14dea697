#include <doctest.h>

#include <cmath>

#include "gfra/rate_stats.hpp"

using namespace gfra;

TEST_SUITE("rate_stats") {

TEST_CASE("grid points") {
  const RateGrid g{0.0, 2.0, 0.5};
  const auto p = g.points();
  REQUIRE(p.size() == 5);
  CHECK(p.front() == 0.0);
  CHECK(p.back() == doctest::Approx(2.0));
  CHECK(RateGrid{}.points().size() == 201);
}

TEST_CASE("empirical CCDF") {
  const std::vector<double> r{0.0, 1.0, 10.0, 100.0};
  const RateGrid g{-5.0, 25.0, 5.0};
  const Ccdf c = empirical_ccdf(r, g);
  REQUIRE(c.rate_db.size() == 7);
  // Grid -5, 0, 5, 10, 15, 20, 25 dB; samples at -inf, 0, 10, 20 dB.
  const std::vector<double> expected{0.75, 0.5, 0.5, 0.25, 0.25, 0.0, 0.0};
  for (std::size_t i = 0; i < expected.size(); ++i) CHECK(c.exceedance[i] == doctest::Approx(expected[i]));
  for (std::size_t i = 1; i < c.exceedance.size(); ++i) CHECK(c.exceedance[i] <= c.exceedance[i - 1]);

  const Ccdf e = empirical_ccdf(std::vector<double>{}, g);
  for (double v : e.exceedance) CHECK(v == 0.0);
}

TEST_CASE("likely and ergodic rates") {
  std::vector<double> r(100);
  for (int i = 0; i < 100; ++i) r[i] = 100.0 - i;  // 1..100
  CHECK(likely95_rate(r) == 6.0);                   // floor(0.05 * 100) = 5th order statistic
  CHECK(ergodic_rate(r) == doctest::Approx(50.5));
  CHECK(std::isnan(likely95_rate(std::vector<double>{})));
  CHECK(std::isnan(ergodic_rate(std::vector<double>{})));
  CHECK(likely95_rate(std::vector<double>{3.0}) == 3.0);
  CHECK(std::isinf(rate_to_db(0.0)));
  CHECK(rate_to_db(1000.0) == doctest::Approx(30.0));
}

}
