#include "hilop/quadrature.hpp"

#include "hilop/errors.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace hilop;

namespace {
double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }
}

TEST_CASE("smooth finite intervals") {
    const auto r = quadrature::integrate_interval([](double x) { return std::sin(x); }, 0.0,
                                                  std::numbers::pi, 0.0, 0.0);
    CHECK(rel(r.value, 2.0) <= 1e-12);
    CHECK(std::abs(r.value - 2.0) <= r.abs_error_estimate + 1e-14);
    CHECK(r.evaluations > 0);

    // Cross-check against an unrelated fixed rule on a second smooth integrand.
    const auto f = [](double x) { return std::exp(-x * x); };
    const auto gk = quadrature::integrate_interval(f, 0.0, 2.0, 0.0, 0.0);
    const double simpson = oracle::simpson(f, 0.0, 2.0, 4096);
    CHECK(rel(gk.value, simpson) <= 1e-10);
}

TEST_CASE("algebraic endpoint singularities") {
    // int_0^1 x^{-0.9} dx = 10
    const auto a = quadrature::integrate_interval([](double x) { return std::pow(x, -0.9); }, 0.0,
                                                  1.0, -0.9, 0.0);
    CHECK(rel(a.value, 10.0) <= 1e-9);

    // int_0^{1/4} t^{-0.55} (1+t)^{-1} dt, frozen reference
    const auto b = quadrature::integrate_interval(
        [](double t) { return std::pow(t, -0.55) / (1.0 + t); }, 0.0, 0.25, -0.55, 0.0);
    CHECK(rel(b.value, oracle::left_sing_055) <= 1e-10);

    // int_0^1 (1-x)^{-0.5} dx = 2, singularity at the right endpoint. The
    // singular point sits at 1, so f's argument can only approach it to
    // machine distance; accuracy is capped near eps^{1+expo} ~ 1.5e-8.
    const auto c = quadrature::integrate_interval(
        [](double x) { return 1.0 / std::sqrt(1.0 - x); }, 0.0, 1.0, 0.0, -0.5);
    CHECK(rel(c.value, 2.0) <= 1e-7);
}

TEST_CASE("tails with algebraic decay") {
    // int_1^inf x^{-0.75} (x+1)^{-1.5} dx, frozen reference
    const auto r = quadrature::integrate_tail(
        [](double x) { return std::pow(x, -0.75) * std::pow(x + 1.0, -1.5); }, 1.0, 2.25);
    CHECK(rel(r.value, oracle::tail_alg_075_15) <= 1e-10);

    // int_1^inf x^{-1.1} dx = 10, slow decay
    const auto s =
        quadrature::integrate_tail([](double x) { return std::pow(x, -1.1); }, 1.0, 1.1);
    CHECK(rel(s.value, 10.0) <= 1e-9);
}

TEST_CASE("half line with singularity and decay at once") {
    // int_0^inf x^{-0.55} (1+x)^{-1} dx = B(0.45, 0.55)
    quadrature::IntegrandSpec spec;
    spec.f = [](double x) { return std::pow(x, -0.55) / (1.0 + x); };
    spec.singular_exponent_zero = -0.55;
    spec.decay_exponent_inf = 1.55;
    const auto r = quadrature::integrate_half_line(spec);
    CHECK(rel(r.value, oracle::beta_045_055) <= 1e-9);
    CHECK(std::abs(r.value - oracle::beta_045_055) <= r.abs_error_estimate + 1e-12);

    // Exponential decay understated as algebraic is still handled.
    quadrature::IntegrandSpec g;
    g.f = [](double x) { return std::exp(-x); };
    g.singular_exponent_zero = 0.0;
    g.decay_exponent_inf = 3.0;
    const auto e = quadrature::integrate_half_line(g);
    CHECK(rel(e.value, 1.0) <= 1e-9);
}

TEST_CASE("budget exhaustion reports instead of lying") {
    quadrature::IntegrandSpec spec;
    spec.f = [](double x) { return std::cos(50.0 / (x + 0.01)) / (1.0 + x * x); };
    spec.singular_exponent_zero = 0.0;
    spec.decay_exponent_inf = 2.0;
    CHECK_THROWS_AS(quadrature::integrate_half_line(spec, 1e-13, 300),
                    non_convergence_error);
}

TEST_CASE("argument validation") {
    CHECK_THROWS_AS(quadrature::integrate_interval([](double) { return 1.0; }, 0.0, 1.0, 0.0, 0.0,
                                                   1e-2),
                    std::domain_error);
    CHECK_THROWS_AS(quadrature::integrate_tail([](double) { return 1.0; }, 1.0, 0.9),
                    divergence_error);
    CHECK_THROWS_AS(quadrature::integrate_interval([](double x) { return std::pow(x, -1.2); },
                                                   0.0, 1.0, -1.2, 0.0),
                    divergence_error);
}
