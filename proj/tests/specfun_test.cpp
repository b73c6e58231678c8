#include "hilop/specfun.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

using namespace hilop;

namespace {
double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }
}

TEST_CASE("log_gamma tracks the standard library across the domain") {
    const double xs[] = {0.05, 0.25, 0.5,  0.75, 1.0,   1.5,    2.0,   3.7,
                         10.0, 25.5, 75.0, 171.0, 500.5, 1e4, 1e8};
    for (double x : xs) CHECK(std::abs(specfun::log_gamma(x) - std::lgamma(x)) <=
                              1e-12 * std::max(1.0, std::abs(std::lgamma(x))));
}

TEST_CASE("gamma hits exact values") {
    CHECK(rel(specfun::gamma(1.0), 1.0) <= 1e-14);
    CHECK(rel(specfun::gamma(5.0), 24.0) <= 1e-13);
    const double g_half = specfun::gamma(0.5);
    CHECK(rel(g_half * g_half, std::numbers::pi) <= 1e-13);
}

TEST_CASE("gamma rejects nonpositive arguments") {
    CHECK_THROWS_AS(specfun::gamma(0.0), std::domain_error);
    CHECK_THROWS_AS(specfun::log_gamma(-1.5), std::domain_error);
}

TEST_CASE("beta matches its reference value and symmetries") {
    CHECK(rel(specfun::beta(0.45, 0.55), oracle::beta_045_055) <= 1e-13);
    CHECK(rel(specfun::beta(0.45, 0.55), specfun::beta(0.55, 0.45)) <= 1e-15);
    CHECK(rel(specfun::beta(1.0, 7.25), 1.0 / 7.25) <= 1e-13);
    // B(a, 1-a) = pi / sin(pi a)
    CHECK(rel(specfun::beta(0.3, 0.7), std::numbers::pi / std::sin(0.3 * std::numbers::pi)) <=
          1e-13);
}

TEST_CASE("factorial remainder sits inside its envelope") {
    const auto at1 = specfun::stirling_remainder(1.0);
    CHECK(rel(at1.remainder, oracle::stirling_rem_1) <= 1e-8);
    CHECK(rel(at1.bound, oracle::stirling_bound_1) <= 1e-8);
    for (double x : {0.5, 1.0, 2.0, 5.0, 10.0, 100.0, 1e3, 1e6, 1e12}) {
        const auto c = specfun::stirling_remainder(x);
        CHECK(c.remainder > 0.0);
        CHECK(c.remainder <= c.bound);
    }
    CHECK_THROWS_AS(specfun::stirling_remainder(1e307), std::overflow_error);
    CHECK_THROWS_AS(specfun::stirling_remainder(0.0), std::domain_error);
}

TEST_CASE("power series tails complete past the block") {
    const auto t10 = specfun::power_zeta_tail(2.0, 10);
    CHECK(rel(t10.total(), oracle::zeta2_past_10) <= 1e-13);
    CHECK(std::abs(t10.total() - oracle::zeta2_past_10) <= t10.tail_error_bound + 1e-15);

    const auto t1 = specfun::power_zeta_tail(2.0, 1);
    CHECK(rel(t1.total(), oracle::zeta2_past_1) <= 1e-13);

    const auto t15 = specfun::power_zeta_tail(1.5, 1);
    CHECK(rel(t15.total(), oracle::zeta15_past_1) <= 1e-12);

    // Large offsets skip straight to the completion.
    const auto far = specfun::power_zeta_tail(2.0, 100000);
    CHECK(rel(far.total(), 1.0 / 100000.5) <= 1e-9); // ~ 1/(N + 1/2)

    CHECK_THROWS_AS(specfun::power_zeta_tail(1.0, 10), std::domain_error);
}

TEST_CASE("normalized power-geometric sums") {
    for (double w : {0.1, 0.5, 0.9, 0.99, 0.999}) {
        CHECK(rel(specfun::geometric_power_sum_ratio(1.0, w), w * w) <= 1e-13);
        CHECK(rel(specfun::geometric_power_sum_ratio(2.0, w), w * w) <= 1e-13);
    }
    const double ws[] = {0.5, 0.9, 0.99, 0.999};
    for (int i = 0; i < 4; ++i)
        CHECK(rel(specfun::geometric_power_sum_ratio(0.5, ws[i]), oracle::est_half[i]) <= 5e-6);
    CHECK_THROWS_AS(specfun::geometric_power_sum_ratio(0.5, 1.0), std::domain_error);
    CHECK_THROWS_AS(specfun::geometric_power_sum_ratio(0.0, 0.5), std::domain_error);
}
