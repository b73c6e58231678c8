#pragma once

#include <cstdint>
#include <functional>

namespace hilop::quadrature {

// Integrand over (0, inf) together with its endpoint behaviour:
//   f(x) ~ x^{singular_exponent_zero}  as x -> 0+   (must be > -1)
//   f(x) ~ x^{-decay_exponent_inf}     as x -> inf  (must be > 1)
// The exponents drive substitutions that flatten the endpoints; overstating
// decay (e.g. for exponentially small tails) is fine as long as the stated
// power is a lower bound on the actual decay.
struct IntegrandSpec {
    std::function<double(double)> f;
    double singular_exponent_zero = 0.0;
    double decay_exponent_inf = 2.0;
};

struct QuadratureResult {
    double value = 0.0;
    double abs_error_estimate = 0.0;
    std::uint64_t evaluations = 0;
};

inline constexpr double default_rel_tol = 1e-9;
inline constexpr std::uint64_t default_budget = 1'000'000;

// Adaptive Gauss-Kronrod 7/15 with worst-segment bisection. rel_tol must lie
// in [1e-13, 1e-3]. Throws non_convergence_error if the budget is exhausted
// with the error estimate still above tolerance.
QuadratureResult integrate_half_line(const IntegrandSpec &spec,
                                     double rel_tol = default_rel_tol,
                                     std::uint64_t budget = default_budget);

// Finite interval [a, b]; exponent_a / exponent_b describe algebraic behaviour
// at the endpoints, f(x) ~ (x-a)^{exponent_a} etc., both > -1. Pass 0 for a
// regular endpoint.
//
// A singular endpoint at 0 is resolved to full precision (the substituted
// nodes approach it with exact relative spacing). A singular endpoint at
// c != 0 can only be approached to distances of order eps*|c| through f's
// own argument, which caps the attainable relative accuracy near
// eps^{1+exponent}. Integrands that are genuinely singular at such a point
// should be re-expressed by the caller in the distance variable instead
// (as the measures module does around t = 1).
QuadratureResult integrate_interval(const std::function<double(double)> &f, double a, double b,
                                    double exponent_a, double exponent_b,
                                    double rel_tol = default_rel_tol,
                                    std::uint64_t budget = default_budget);

// [a, inf) with a > 0, f ~ x^{-decay_exponent_inf} at infinity (> 1).
QuadratureResult integrate_tail(const std::function<double(double)> &f, double a,
                                double decay_exponent_inf,
                                double rel_tol = default_rel_tol,
                                std::uint64_t budget = default_budget);

} // namespace hilop::quadrature
