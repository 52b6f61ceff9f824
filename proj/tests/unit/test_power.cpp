#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "threshold_lab/power.hpp"

using namespace threshold_lab;

TEST_CASE("design validation") {
  CHECK_NOTHROW(ZTestDesign(40, 43, 8, 0.05, 0.02));
  CHECK_THROWS_AS(ZTestDesign(40, 40, 8, 0.05, 0.02), std::invalid_argument);
  CHECK_THROWS_AS(ZTestDesign(40, 43, 0, 0.05, 0.02), std::invalid_argument);
  CHECK_THROWS_AS(ZTestDesign(40, 43, 8, 0.0, 0.02), std::invalid_argument);
  CHECK_THROWS_AS(ZTestDesign(40, 43, 8, 0.05, 1.0), std::invalid_argument);
  CHECK(ZTestDesign(43, 40, 8, 0.05, 0.02).effect() == 3.0);
}

TEST_CASE("required_n examples") {
  CHECK(required_n(ZTestDesign(40, 43, 8, 0.05, 0.02)) == 98);
  CHECK(required_n(ZTestDesign(40, 43, 8, 0.01, 0.02)) == 137);
  // z_{1-β} = 0 when β = .5, so n = ⌈z_{.95}²⌉ = ⌈2.7055⌉.
  CHECK(required_n(ZTestDesign(0, 1, 1, 0.05, 0.5)) == 3);
  // Direction of the alternative does not matter.
  CHECK(required_n(ZTestDesign(43, 40, 8, 0.05, 0.02)) == 98);
}

TEST_CASE("achieved_power examples") {
  const ZTestDesign design(40, 43, 8, 0.05, 0.02);
  CHECK(achieved_power(98, design) >= 0.98);
  CHECK(achieved_power(97, design) < 0.98);
  CHECK_THROWS_AS(achieved_power(0, design), std::invalid_argument);
}

TEST_CASE("required_n is minimal over a grid of designs") {
  for (int e = 1; e <= 10; ++e) {
    const double effect = 0.1 * e;
    for (double alpha : {0.05, 0.01, 0.001}) {
      for (double beta : {0.2, 0.1, 0.02}) {
        const ZTestDesign design(0.0, effect, 1.0, alpha, beta);
        const auto n = required_n(design);
        CAPTURE(effect);
        CAPTURE(alpha);
        CAPTURE(beta);
        CHECK(achieved_power(n, design) >= 1.0 - beta);
        if (n > 1) CHECK(achieved_power(n - 1, design) < 1.0 - beta);
      }
    }
  }
}

TEST_CASE("required_n grows as alpha or the effect shrinks") {
  for (double beta : {0.2, 0.02}) {
    std::int64_t prev = 0;
    for (double alpha : {0.1, 0.05, 0.01, 0.001, 0.0001}) {
      const auto n = required_n(ZTestDesign(0, 0.5, 1, alpha, beta));
      CHECK(n >= prev);
      prev = n;
    }
    prev = 0;
    for (double effect : {2.0, 1.0, 0.5, 0.25, 0.1}) {
      const auto n = required_n(ZTestDesign(0, effect, 1, 0.05, beta));
      CHECK(n >= prev);
      prev = n;
    }
  }
}

TEST_CASE("achieved_power increases in n") {
  const ZTestDesign design(40, 43, 8, 0.05, 0.02);
  double prev = 0.0;
  for (std::int64_t n = 1; n <= 150; ++n) {
    const double p = achieved_power(n, design);
    CHECK(p > prev);
    prev = p;
  }
}

TEST_CASE("diagnosticity_gain examples") {
  const auto gain = diagnosticity_gain({0.05, 98}, {0.01, 137});
  CHECK(gain.odds_a >= 0.5);
  CHECK(gain.odds_a <= 1.5);
  CHECK(gain.odds_b >= 1.5);
  CHECK(gain.odds_b <= 4.5);
  CHECK(gain.ratio == doctest::Approx(gain.odds_b / gain.odds_a));

  const auto same = diagnosticity_gain({0.01, 137}, {0.01, 137});
  CHECK(same.ratio == 1.0);

  const auto wide = diagnosticity_gain({0.05, 100}, {0.0001, 100});
  CHECK(wide.ratio > 30.0);

  CHECK_THROWS_AS(diagnosticity_gain({0.05, 4}, {0.01, 137}), InfeasibleSelection);
}
