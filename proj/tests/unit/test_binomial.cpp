#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <limits>
#include <random>

#include "oracles/exact_binomial.hpp"
#include "threshold_lab/binomial.hpp"
#include "threshold_lab/log_space.hpp"

using namespace threshold_lab;

namespace {

double null_pmf(std::int64_t n, std::int64_t s) { return std::exp(log_pmf({n, s}, BinomialModel::null())); }

double rel_err(double got, double expected) { return std::abs(got - expected) / std::abs(expected); }

}  // namespace

TEST_CASE("outcome and model invariants") {
  CHECK_NOTHROW(BinomialOutcome(1, 0));
  CHECK_NOTHROW(BinomialOutcome(5, 5));
  CHECK_THROWS_AS(BinomialOutcome(0, 0), std::invalid_argument);
  CHECK_THROWS_AS(BinomialOutcome(5, 6), std::invalid_argument);
  CHECK_THROWS_AS(BinomialOutcome(5, -1), std::invalid_argument);
  CHECK_THROWS_AS(BinomialModel(-0.1), std::invalid_argument);
  CHECK_THROWS_AS(BinomialModel(1.5), std::invalid_argument);
  CHECK_THROWS_AS(BinomialModel(std::numeric_limits<double>::quiet_NaN()), std::invalid_argument);
  CHECK(BinomialModel::null().theta() == 0.5);
}

TEST_CASE("log_pmf examples") {
  CHECK(log_pmf({2, 1}, BinomialModel(0.5)) == std::log(0.5));
  // C(100,50) / 2^100 from exact rationals.
  const double exact = oracle::to_double(oracle::pmf_half(100, 50));
  CHECK(rel_err(std::exp(log_pmf({100, 50}, BinomialModel(0.5))), exact) < 1e-12);
  CHECK(rel_err(std::exp(log_pmf({100, 50}, BinomialModel(0.5))), 0.0796) < 1e-3);
  CHECK(log_pmf({10, 0}, BinomialModel(0.0)) == 0.0);
}

TEST_CASE("log_pmf at degenerate theta") {
  const double neg_inf = -std::numeric_limits<double>::infinity();
  CHECK(log_pmf({10, 3}, BinomialModel(0.0)) == neg_inf);
  CHECK(log_pmf({10, 10}, BinomialModel(1.0)) == 0.0);
  CHECK(log_pmf({10, 9}, BinomialModel(1.0)) == neg_inf);
}

TEST_CASE("log_pmf at general theta matches direct evaluation") {
  // 10 choose 3 * 0.3^3 * 0.7^7
  const double expected = 120.0 * std::pow(0.3, 3) * std::pow(0.7, 7);
  CHECK(rel_err(std::exp(log_pmf({10, 3}, BinomialModel(0.3))), expected) < 1e-13);
}

TEST_CASE("pmf symmetry under the null is exact") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 5000; ++i) {
    const std::int64_t n = std::uniform_int_distribution<std::int64_t>(1, 100000)(rng);
    const std::int64_t s = std::uniform_int_distribution<std::int64_t>(0, n)(rng);
    CHECK(log_pmf({n, s}, BinomialModel::null()) == log_pmf({n, n - s}, BinomialModel::null()));
  }
}

TEST_CASE("pmf normalizes for a spread of n") {
  for (std::int64_t n : {1, 2, 3, 17, 100, 999, 4096, 9999, 10000}) {
    double acc = -std::numeric_limits<double>::infinity();
    for (std::int64_t s = 0; s <= n; ++s) acc = log_add_exp(acc, log_pmf({n, s}, BinomialModel::null()));
    CHECK(std::abs(std::exp(acc) - 1.0) < 1e-10);
  }
}

TEST_CASE("p_value examples") {
  CHECK(p_value({2, 2}, TailConvention::TwoSidedSymmetric) == doctest::Approx(0.5).epsilon(1e-15));
  const double p61 = oracle::to_double(oracle::p_value(100, 61, true));
  const double p60 = oracle::to_double(oracle::p_value(100, 60, true));
  CHECK(rel_err(p_value({100, 61}, TailConvention::TwoSidedSymmetric), p61) < 1e-12);
  CHECK(rel_err(p_value({100, 60}, TailConvention::TwoSidedSymmetric), p60) < 1e-12);
  CHECK(p_value({100, 61}, TailConvention::TwoSidedSymmetric) == doctest::Approx(0.0352).epsilon(1e-3));
  CHECK(p_value({100, 60}, TailConvention::TwoSidedSymmetric) == doctest::Approx(0.0569).epsilon(1e-3));
}

TEST_CASE("p_value edge cases") {
  CHECK(p_value({10, 5}, TailConvention::TwoSidedSymmetric) == 1.0);
  CHECK(p_value({11, 6}, TailConvention::TwoSidedSymmetric) <= 1.0);
  CHECK(p_value({11, 6}, TailConvention::TwoSidedSymmetric) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(p_value({10, 0}, TailConvention::OneSidedUpper) == 1.0);
  CHECK(p_value({10, 10}, TailConvention::OneSidedUpper) == std::ldexp(1.0, -10));
  // Mirror outcomes share a two-sided p-value.
  CHECK(p_value({30, 8}, TailConvention::TwoSidedSymmetric) == p_value({30, 22}, TailConvention::TwoSidedSymmetric));
  // Deep tail stays representable in log space.
  CHECK(log_p_value({10000, 10000}, TailConvention::OneSidedUpper) ==
        doctest::Approx(-10000.0 * std::log(2.0)).epsilon(1e-14));
}

TEST_CASE("p_value matches exact sums for all small outcomes") {
  for (std::int64_t n = 1; n <= 40; ++n) {
    for (std::int64_t s = 0; s <= n; ++s) {
      for (bool two : {true, false}) {
        const auto tail = two ? TailConvention::TwoSidedSymmetric : TailConvention::OneSidedUpper;
        const double exact = oracle::to_double(oracle::p_value(n, s, two));
        CHECK(rel_err(p_value({n, s}, tail), exact) < 1e-13);
      }
    }
  }
}

TEST_CASE("two-sided p_value is non-increasing away from n/2") {
  for (std::int64_t n : {7, 20, 51, 100, 1001, 5000}) {
    double prev = 2.0;
    for (std::int64_t s = (n + 1) / 2; s <= n; ++s) {
      const double p = p_value({n, s}, TailConvention::TwoSidedSymmetric);
      CHECK(p <= prev);
      prev = p;
    }
  }
}

TEST_CASE("select_barely_significant examples") {
  const auto nearest = select_barely_significant(100, 0.05, SelectionMode::NearestToAlpha);
  CHECK(nearest.s == 60);
  CHECK(nearest.p_achieved == doctest::Approx(0.0569).epsilon(1e-3));

  const auto strict = select_barely_significant(100, 0.05, SelectionMode::StrictAtMostAlpha);
  CHECK(strict.s == 61);
  CHECK(strict.p_achieved == doctest::Approx(0.0352).epsilon(1e-3));

  const auto at_01 = select_barely_significant(100, 0.01, SelectionMode::NearestToAlpha);
  CHECK(at_01.s == 63);
  CHECK(at_01.p_achieved == doctest::Approx(0.0121).epsilon(1e-2));
}

TEST_CASE("select_barely_significant errors") {
  CHECK_THROWS_AS(select_barely_significant(4, 0.05, SelectionMode::StrictAtMostAlpha), InfeasibleSelection);
  CHECK_THROWS_AS(select_barely_significant(4, 0.05, SelectionMode::NearestToAlpha), InfeasibleSelection);
  try {
    select_barely_significant(10, 0.0001);
    FAIL("expected InfeasibleSelection");
  } catch (const InfeasibleSelection& e) {
    CHECK(e.n() == 10);
    CHECK(e.alpha() == 0.0001);
    CHECK(e.best_p() == doctest::Approx(2.0 / 1024.0));
  }
  CHECK_THROWS_AS(select_barely_significant(0, 0.05), std::invalid_argument);
  CHECK_THROWS_AS(select_barely_significant(10, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(select_barely_significant(10, 1.0), std::invalid_argument);
}

TEST_CASE("selection agrees with exhaustive exact enumeration") {
  for (std::int64_t n = 1; n <= 30; ++n) {
    for (double alpha : {0.05, 0.01, 0.001}) {
      for (bool nearest : {true, false}) {
        for (bool two : {true, false}) {
          const auto mode = nearest ? SelectionMode::NearestToAlpha : SelectionMode::StrictAtMostAlpha;
          const auto tail = two ? TailConvention::TwoSidedSymmetric : TailConvention::OneSidedUpper;
          const auto expected = oracle::select(n, alpha, nearest, two);
          CAPTURE(n);
          CAPTURE(alpha);
          CAPTURE(nearest);
          CAPTURE(two);
          if (!expected) {
            CHECK_THROWS_AS(select_barely_significant(n, alpha, mode, tail), InfeasibleSelection);
          } else {
            const auto got = select_barely_significant(n, alpha, mode, tail);
            CHECK(got.s == expected->s);
            CHECK(rel_err(got.p_achieved, oracle::to_double(expected->p)) < 1e-13);
          }
        }
      }
    }
  }
}

TEST_CASE("achieved p is re-derivable bit for bit") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 300; ++i) {
    const std::int64_t n = std::uniform_int_distribution<std::int64_t>(1, 3000)(rng);
    const double alpha = std::exp(std::uniform_real_distribution<double>(std::log(1e-6), std::log(0.2))(rng));
    for (auto mode : {SelectionMode::NearestToAlpha, SelectionMode::StrictAtMostAlpha}) {
      for (auto tail : {TailConvention::TwoSidedSymmetric, TailConvention::OneSidedUpper}) {
        try {
          const auto sel = select_barely_significant(n, alpha, mode, tail);
          CHECK(sel.s > n / 2);
          CHECK(sel.s <= n);
          CHECK(sel.p_achieved == p_value({n, sel.s}, tail));
          if (mode == SelectionMode::StrictAtMostAlpha) {
            CHECK(sel.p_achieved <= alpha);
            if (sel.s - 1 > n / 2) CHECK(p_value({n, sel.s - 1}, tail) > alpha);
          }
        } catch (const InfeasibleSelection&) {
          CHECK(p_value({n, n}, tail) > alpha);
        }
      }
    }
  }
}

TEST_CASE("nearest selection is within one pmf step of alpha") {
  for (std::int64_t n = 6; n <= 2000; n += 7) {
    for (double alpha : {0.05, 0.01, 0.001, 0.0001}) {
      try {
        const auto sel = select_barely_significant(n, alpha);
        const double bound = null_pmf(n, sel.s) + null_pmf(n, sel.s - 1);
        CHECK(std::abs(sel.p_achieved - alpha) <= bound);
      } catch (const InfeasibleSelection&) {
      }
    }
  }
}

TEST_CASE("enum names round trip") {
  for (auto tail : {TailConvention::TwoSidedSymmetric, TailConvention::OneSidedUpper}) {
    CHECK(parse_tail(to_string(tail)) == tail);
  }
  for (auto mode : {SelectionMode::NearestToAlpha, SelectionMode::StrictAtMostAlpha}) {
    CHECK(parse_mode(to_string(mode)) == mode);
  }
  CHECK(parse_mode("StrictAtMostAlpha") == SelectionMode::StrictAtMostAlpha);
  CHECK_THROWS_AS(parse_mode("closest"), std::invalid_argument);
  CHECK_THROWS_AS(parse_tail("both"), std::invalid_argument);
}
