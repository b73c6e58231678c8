#pragma once

#include <cstdint>

namespace hilop::specfun {

// ln Gamma(x), x > 0. Lanczos approximation (g = 7, 9 coefficients) evaluated
// in log form; relative error on Gamma below 1e-13 across the domain.
double log_gamma(double x);

// Gamma(x), x > 0.
double gamma(double x);

// B(u, v) = Gamma(u)Gamma(v)/Gamma(u+v), u > 0, v > 0.
double beta(double u, double v);

struct StirlingCheck {
    double remainder; // Gamma(x) / (sqrt(2 pi) x^{x-1/2} e^{-x}) - 1
    double bound;     // e^{1/(12x)} - 1
};

// Both fields computed in log space, so the only overflow is x*ln(x) itself
// exceeding double range (std::overflow_error).
StirlingCheck stirling_remainder(double x);

struct SeriesTailEstimate {
    double partial_sum;      // block summed term by term
    double tail_value;       // analytic completion past the block
    double tail_error_bound; // >= |completion error|, integral-comparison bracket
    double total() const { return partial_sum + tail_value; }
};

// sum_{n > N} n^{-s} for s > 1: a direct block of terms followed by an
// Euler-Maclaurin completion at the block end.
SeriesTailEstimate power_zeta_tail(double s, std::uint64_t N);

// (1 - w^2)^c * sum_{n >= 1} n^{c-1} w^{2n}, for 0 < w < 1, c > 0.
// Summed past the term peak until terms are negligible, then closed with a
// geometric remainder estimate. Approaches Gamma(c) * (2n|ln w|-scaling)
// behaviour as w -> 1; exactly w^2 when c = 1 or c = 2.
double geometric_power_sum_ratio(double c, double w);

} // namespace hilop::specfun
