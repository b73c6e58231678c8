#include "hilop/specfun.hpp"

#include "hilop/errors.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hilop::specfun {

namespace {

constexpr double half_log_two_pi = 0.91893853320467274178; // ln(2 pi)/2

constexpr double lanczos_c[9] = {
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
};

} // namespace

double log_gamma(double x) {
    if (!(x > 0.0)) throw std::domain_error("log_gamma: requires x > 0");
    if (x < 0.5) return log_gamma(x + 1.0) - std::log(x);
    const double z = x - 1.0;
    double series = lanczos_c[0];
    for (int i = 1; i < 9; ++i) series += lanczos_c[i] / (z + i);
    const double t = z + 7.5;
    return half_log_two_pi + (z + 0.5) * std::log(t) - t + std::log(series);
}

double gamma(double x) { return std::exp(log_gamma(x)); }

double beta(double u, double v) {
    if (!(u > 0.0) || !(v > 0.0)) throw std::domain_error("beta: requires u > 0 and v > 0");
    return std::exp(log_gamma(u) + log_gamma(v) - log_gamma(u + v));
}

StirlingCheck stirling_remainder(double x) {
    if (!(x > 0.0)) throw std::domain_error("stirling_remainder: requires x > 0");
    const double log_prefactor = half_log_two_pi + (x - 0.5) * std::log(x) - x;
    if (!std::isfinite(log_prefactor))
        throw std::overflow_error("stirling_remainder: x ln x overflows double range");
    const double envelope_exponent = 1.0 / (12.0 * x);
    double d;
    if (x < 15.0) {
        d = log_gamma(x) - log_prefactor;
    } else {
        // ln Gamma(x) - log_prefactor equals the Stirling series
        //   1/(12x) - 1/(360x^3) + 1/(1260x^5) - ...
        // Summing it directly sidesteps the cancellation of the two logs,
        // which swallows the whole remainder once x is large. Truncation
        // after x^{-13} is below double rounding for x >= 15, and the
        // correction past the leading term is negative, so the computed
        // exponent never exceeds the envelope's.
        const double u = 1.0 / (x * x);
        double poly = 1.0 / 156.0;
        poly = poly * u - 691.0 / 360360.0;
        poly = poly * u + 1.0 / 1188.0;
        poly = poly * u - 1.0 / 1680.0;
        poly = poly * u + 1.0 / 1260.0;
        poly = poly * u - 1.0 / 360.0;
        d = envelope_exponent + poly * u / x;
    }
    return {std::expm1(d), std::expm1(envelope_exponent)};
}

SeriesTailEstimate power_zeta_tail(double s, std::uint64_t N) {
    if (!(s > 1.0)) throw std::domain_error("power_zeta_tail: requires s > 1");

    // Direct block. Terms decay monotonically; stop once they are negligible
    // relative to the running sum or the block cap is hit.
    const std::uint64_t block_cap = 16384;
    double partial = 0.0;
    std::uint64_t m = N;
    for (std::uint64_t i = 0; i < block_cap; ++i) {
        ++m;
        const double term = std::pow(static_cast<double>(m), -s);
        partial += term;
        if (i >= 64 && term < 1e-17 * partial) break;
    }

    // Euler-Maclaurin completion of sum_{n > m}:
    //   integral - f(m)/2 - f'(m)/12 + f'''(m)/720 - f^(5)(m)/30240
    const double M = static_cast<double>(m);
    const double f0 = std::pow(M, -s);
    const double integral = std::pow(M, 1.0 - s) / (s - 1.0);
    double tail = integral - 0.5 * f0;
    tail += s * f0 / (12.0 * M);
    tail -= s * (s + 1.0) * (s + 2.0) * f0 / (720.0 * M * M * M);
    tail += s * (s + 1.0) * (s + 2.0) * (s + 3.0) * (s + 4.0) * f0 / (30240.0 * M * M * M * M * M);

    const double bracket = (std::pow(M, 1.0 - s) - std::pow(M + 1.0, 1.0 - s)) / (s - 1.0);
    return {partial, tail, bracket};
}

double geometric_power_sum_ratio(double c, double w) {
    if (!(c > 0.0)) throw std::domain_error("geometric_power_sum_ratio: requires c > 0");
    if (!(w > 0.0 && w < 1.0)) throw std::domain_error("geometric_power_sum_ratio: requires 0 < w < 1");

    const double lw2 = 2.0 * std::log(w); // < 0
    const double peak = c > 1.0 ? (c - 1.0) / (-lw2) : 0.0;
    double acc = 0.0, comp = 0.0; // Kahan-compensated: slow w needs ~1e4 terms
    std::uint64_t n = 0;
    for (;;) {
        ++n;
        const double nd = static_cast<double>(n);
        const double term = std::exp((c - 1.0) * std::log(nd) + nd * lw2);
        const double y = term - comp;
        const double t = acc + y;
        comp = (t - acc) - y;
        acc = t;
        if (nd > peak && term < 1e-16 * acc) break;
        if (n > 50'000'000)
            throw non_convergence_error("geometric_power_sum_ratio: series did not settle");
    }

    // Geometric remainder: terms beyond n grow at most by ((n+1)/n)^{c-1} per
    // step on the power factor, already past the peak.
    const double nd = static_cast<double>(n);
    const double grow = c > 1.0 ? std::pow((nd + 1.0) / nd, c - 1.0) : 1.0;
    const double ratio = w * w * grow;
    const double next = std::exp((c - 1.0) * std::log(nd + 1.0) + (nd + 1.0) * lw2);
    if (ratio < 1.0) acc += next / (1.0 - ratio);

    return acc * std::pow(1.0 - w * w, c);
}

} // namespace hilop::specfun
