#pragma once

#include "hilop/measures.hpp"
#include "hilop/operators.hpp"
#include "hilop/params.hpp"
#include "hilop/piecewise_power.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace hilop::extremal {

// Near-extremal test families.
//   power_tail:   eps^{1/p} x^{-(1+theta1*eps)/p} on [1, inf), ||.||_p = theta1^{-1/p}
//   unit_power:   theta1 = 1 variant with exact unit norm
//   step_blocks:  (1-w^2)^{1/p} w^{2(k-1)/p} on (k, k+1], unit L^p norm
//   step_weights: sequence (1-w^2)^{1/q} w^{2(n-1)/q}, unit l^q norm
enum class FamilyKind { power_tail, unit_power, step_blocks, step_weights };

struct ExtremalFamily {
    FamilyKind kind;
    double p;
    double parameter; // eps for the power families, w for the step families
    double theta1;
    PiecewisePowerFunction function; // empty for step_weights
    double exact_norm;               // closed form, no truncation error

    // step_weights entries; n starts at 1.
    double sequence_value(std::uint64_t n) const;
};

ExtremalFamily build_family(FamilyKind kind, double parameter, double p, double theta1 = 1.0);

// L(eps) = B((1+beta+eps)/p, (p-1-alpha-eps)/p); the eps -> 0 limit recovers
// the Beta factor of the sharp constant. Needs 0 < eps < p-1-alpha.
double L_epsilon(const OperatorParams &params, double eps);

struct RayleighBound {
    double value;          // ||H f||_p / ||f||_p with completed tail
    double sigma_fitted;   // least-squares decay index of the computed window
    double sigma_analytic; // (1 + eps*theta2)/p
    double tail_fraction;  // share of ||H f||_p^p carried by the completion
};

// Lower bound for the operator norm from the power_tail family at the
// critical lambda. The window v_1..v_N is computed by quadrature; the
// remainder of sum v_n^p is completed analytically from the exact large-n
// expansion of the image, with the fitted index kept as a cross-check.
RayleighBound rayleigh_lower_bound(const OperatorParams &params, double eps, std::uint64_t N,
                                   double rel_tol = 1e-9, unsigned jobs = 1);

struct ScanPoint {
    std::uint64_t N;
    double S_N;          // sum_{n <= N} v_n^p
    double slope_so_far; // d ln S / d ln N against the previous ladder point
};

struct DivergenceFit {
    double fitted_delta;    // least-squares slope of ln S_N vs ln N
    double predicted_delta; // p*theta2*(lambda_star - lambda) - theta2*eps
    std::vector<ScanPoint> points;
};

// Below the critical lambda the partial power sums grow like N^delta; fits the
// growth over the caller's ladder. Requires lambda < lambda_star and a ladder
// on which the predicted exponent is positive.
DivergenceFit divergence_exponent_fit(const OperatorParams &params, double eps,
                                      const std::vector<std::uint64_t> &ladder,
                                      double rel_tol = 1e-9, unsigned jobs = 1);

struct DualityResult {
    double pairing;   // <H f_w, g_w> against the measure kernel
    double surrogate; // nu([w,1)) / (1-w^2)^{lambda_star}
};

// Pairing of the step families across the measure kernel, evaluated through
// the factorized series (one t-integral of two fast power series), plus the
// tail surrogate that controls it.
DualityResult duality_pairing(const OperatorParams &params,
                              const measures::UnitIntervalMeasure &mu, double w);

struct BlowupLadder {
    bool divergent; // true when the defining integral already diverges
    std::vector<std::pair<double, double>> values; // (eps, certified lower bound)
};

// Boundary weight exponents: for gamma = -1 or gamma >= p-1 the operator is
// unbounded and the certified family bound (1/eps) * C(eps)^p blows up along
// eps -> 0. gamma < -1 diverges outright; -1 < gamma < p-1 is the bounded
// regime and a domain error here.
BlowupLadder boundary_gamma_blowup(double p, double gamma, const std::vector<double> &eps_ladder);

// c_n = int_0^inf f(x) (x + n + 1)^{-1} dx for n = 0..N-1: the coefficient
// sequence of the averaging question on the discrete side.
operators::SequenceWindow hardy_coefficient_sequence(const PiecewisePowerFunction &f,
                                                     std::size_t N, double rel_tol = 1e-9);

} // namespace hilop::extremal
