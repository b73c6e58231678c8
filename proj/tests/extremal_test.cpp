#include "hilop/extremal.hpp"

#include "hilop/errors.hpp"
#include "hilop/specfun.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

using namespace hilop;
using extremal::FamilyKind;

namespace {
double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

OperatorParams classic() { return {2.0, 1.0, 1.0, 1.0, 0.0, 0.0}; }

OperatorParams skewed() { return {3.0, 1.0 - 1.0 / 3.0, 0.8, 1.0, 0.5, -0.5}; }

measures::UnitIntervalMeasure lebesgue() {
    return measures::UnitIntervalMeasure({}, {{0.0, 1.0, 1.0, 0.0}});
}
}

TEST_CASE("families carry exact norms") {
    const auto f = extremal::build_family(FamilyKind::power_tail, 0.1, 2.0, 0.8);
    CHECK(rel(f.exact_norm, std::pow(0.8, -0.5)) <= 1e-14);
    CHECK(rel(f.function.norm_lp(2.0), f.exact_norm) <= 1e-12);
    // value at x = 2: eps^{1/p} x^{-(1 + theta1 eps)/p}
    CHECK(rel(f.function(2.0), std::sqrt(0.1) * std::pow(2.0, -0.54)) <= 1e-13);

    const auto u = extremal::build_family(FamilyKind::unit_power, 0.1, 2.0);
    CHECK(rel(u.exact_norm, 1.0) <= 1e-14);

    const auto blocks = extremal::build_family(FamilyKind::step_blocks, 0.9, 2.5);
    CHECK(rel(blocks.function.norm_lp(2.5), 1.0) <= 1e-10);

    const auto weights = extremal::build_family(FamilyKind::step_weights, 0.9, 2.0);
    double q_sum = 0.0;
    for (std::uint64_t n = 1; n <= 2000; ++n)
        q_sum += std::pow(weights.sequence_value(n), 2.0); // q = 2 when p = 2
    CHECK(rel(q_sum, 1.0) <= 1e-10);
}

TEST_CASE("eps limit of the Beta factor") {
    const auto pr = skewed();
    CHECK(rel(extremal::L_epsilon(pr, 0.05), oracle::L_skew_005) <= 1e-9);
    const double b0 = specfun::beta((1.0 + pr.beta) / pr.p, (pr.p - 1.0 - pr.alpha) / pr.p);
    CHECK(rel(extremal::L_epsilon(pr, 1e-7), b0) <= 1e-5);
    CHECK_THROWS_AS(extremal::L_epsilon(pr, 2.0), std::domain_error);
}

TEST_CASE("rayleigh lower bounds approach the sharp norm") {
    const auto pr = classic();
    const auto r5 = extremal::rayleigh_lower_bound(pr, 0.5, 2000);
    CHECK(rel(r5.value, oracle::ray_classic[0] * std::numbers::pi) <= 2e-5);
    const auto r05 = extremal::rayleigh_lower_bound(pr, 0.05, 2000);
    CHECK(rel(r05.value, oracle::ray_classic_005) <= 1e-6);
    CHECK(r05.value > r5.value);
    CHECK(r05.value < std::numbers::pi * (1.0 + 1e-3));
    CHECK(rel(r05.sigma_analytic, (1.0 + 0.05) / 2.0) <= 1e-14);
    CHECK(std::abs(r05.sigma_fitted - r05.sigma_analytic) <= 0.08 * r05.sigma_analytic);
    CHECK(r05.tail_fraction > 0.2); // slow decay: most of the mass sits past N

    const auto s05 = extremal::rayleigh_lower_bound(skewed(), 0.05, 2000);
    CHECK(rel(s05.value, oracle::ray_skew_005) <= 1e-5);

    CHECK_THROWS_AS(extremal::rayleigh_lower_bound(pr, 0.05, 100), std::domain_error);
    CHECK_THROWS_AS(
        extremal::rayleigh_lower_bound(OperatorParams{2.0, 0.8, 1.0, 1.0, 0.0, 0.0}, 0.1, 2000),
        std::domain_error);
}

TEST_CASE("divergence exponent below the critical index") {
    OperatorParams pr{2.0, 0.75, 1.0, 1.0, 0.0, 0.0};
    const std::vector<std::uint64_t> ladder{10000, 17783, 31623, 56234, 100000};
    const auto fit = extremal::divergence_exponent_fit(pr, 0.1, ladder);
    CHECK(rel(fit.predicted_delta, 0.4) <= 1e-12);
    CHECK(rel(fit.fitted_delta, oracle::div_slope_075) <= 1e-3);
    CHECK(std::abs(fit.fitted_delta - fit.predicted_delta) <= 0.1 * fit.predicted_delta);
    REQUIRE(fit.points.size() == ladder.size());
    CHECK(fit.points.front().N == 10000);
    CHECK(fit.points.back().N == 100000);
    for (std::size_t i = 1; i < fit.points.size(); ++i)
        CHECK(fit.points[i].S_N > fit.points[i - 1].S_N);

    CHECK_THROWS_AS(extremal::divergence_exponent_fit(classic(), 0.1, ladder),
                    std::domain_error);
}

TEST_CASE("duality pairing stays controlled by its surrogate") {
    const auto mu = lebesgue();
    const double ws[] = {0.9, 0.99, 0.999};
    for (int i = 0; i < 3; ++i) {
        const auto d = extremal::duality_pairing(classic(), mu, ws[i]);
        CHECK(rel(d.pairing, oracle::pair_critical[i]) <= 1e-5);
        CHECK(rel(d.surrogate, 1.0 / (1.0 + ws[i])) <= 1e-12);
    }
    // Density 0.5 (1-t)^{-1/2}: mass near t = 1 is no longer Carleson-small,
    // so both the pairing and its surrogate blow up as w -> 1.
    const measures::UnitIntervalMeasure heavy({}, {{0.0, 1.0, 0.5, -0.5}});
    for (int i = 0; i < 3; ++i) {
        const auto d = extremal::duality_pairing(classic(), heavy, ws[i]);
        CHECK(rel(d.pairing, oracle::pair_deficient[i]) <= 1e-5);
        const double s = std::sqrt(1.0 - ws[i]) / (1.0 - ws[i] * ws[i]);
        CHECK(rel(d.surrogate, s) <= 1e-10);
    }
    CHECK(oracle::pair_deficient[2] / oracle::pair_deficient[0] > 10.0);
}

TEST_CASE("boundary exponent blow-up ladders") {
    const std::vector<double> ladder{0.4, 0.2, 0.1, 0.05};
    const auto gm1 = extremal::boundary_gamma_blowup(2.0, -1.0, ladder);
    REQUIRE_FALSE(gm1.divergent);
    REQUIRE(gm1.values.size() == 4);
    for (int i = 0; i < 4; ++i) {
        CHECK(gm1.values[i].first == ladder[i]);
        CHECK(rel(gm1.values[i].second, oracle::blowup_gm1[i]) <= 1e-5);
    }
    const auto gp1 = extremal::boundary_gamma_blowup(2.0, 1.0, ladder);
    REQUIRE_FALSE(gp1.divergent);
    for (int i = 0; i < 4; ++i)
        CHECK(rel(gp1.values[i].second, oracle::blowup_gp1[i]) <= 1e-4);

    CHECK(extremal::boundary_gamma_blowup(2.0, -1.5, ladder).divergent);
    CHECK_THROWS_AS(extremal::boundary_gamma_blowup(2.0, 0.3, ladder), std::domain_error);
}

TEST_CASE("coefficient windows of the averaging question") {
    // f = 1 on (0,1]: c_n = ln((n+2)/(n+1)).
    const PiecewisePowerFunction box({{0.0, 1.0, 1.0, 0.0}});
    const auto win = extremal::hardy_coefficient_sequence(box, 32);
    REQUIRE(win.values.size() == 32);
    for (std::size_t i = 0; i < 32; ++i) {
        const double exact = std::log((static_cast<double>(i) + 2.0) / (static_cast<double>(i) + 1.0));
        CHECK(rel(win.values[i], exact) <= 1e-9);
    }
}
