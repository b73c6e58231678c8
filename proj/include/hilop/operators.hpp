#pragma once

#include "hilop/measures.hpp"
#include "hilop/params.hpp"
#include "hilop/piecewise_power.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace hilop::operators {

// First N entries of an operator image, optionally carrying the fitted
// power tail v_n ~ K n^{-sigma} for completion past the window.
struct SequencePowerTail {
    double sigma;
    double K;
};

struct SequenceWindow {
    std::vector<double> values; // v_1 .. v_N
    std::optional<SequencePowerTail> tail;
};

// Least-squares fit of (ln n, ln v_n) over the last decade of the window.
// Requires at least 20 entries, all positive over the fit range.
SequencePowerTail fit_power_tail(const std::vector<double> &values);

struct CompletedNorm {
    double value;
    double tail_fraction; // share of value^p carried by the completed tail
};

// ||v||_p from the window plus the fitted tail (if present). The tail needs
// sigma*p > 1 to be summable.
CompletedNorm lp_norm_completed(const SequenceWindow &window, double p);

// (H f)(n) = n^{[(theta2-1)+beta*theta2]/p} *
//            int_0^inf x^{[(theta1-1)+alpha*theta1]/q} x^{-alpha*theta1}
//                      (x^{theta1} + n^{theta2})^{-lambda} f(x) dx
// Analytic divergence pre-checks run per piece before any quadrature.
double apply_parametric(const OperatorParams &params, const PiecewisePowerFunction &f,
                        std::uint64_t n, double rel_tol = 1e-9);

// v_n = apply_parametric(n) for n = 1..N, computed on `jobs` threads.
SequenceWindow apply_parametric_window(const OperatorParams &params, const PiecewisePowerFunction &f,
                                       std::uint64_t N, double rel_tol = 1e-9, unsigned jobs = 1);

// Measure-kernel sibling: (H f)(n) = n^{beta/p} int x^{-alpha/p} mu_lambda[x+n] f(x) dx.
double apply_measure_kernel(const OperatorParams &params, const measures::UnitIntervalMeasure &mu,
                            const PiecewisePowerFunction &f, std::uint64_t n,
                            double rel_tol = 1e-8);

// Row weight of the Schur test at the critical lambda:
//   w1(n) = n^{theta2(1+beta)/p} int_0^inf x^{theta1(p-1-alpha)/p - 1}
//           (x^{theta1} + n^{theta2})^{-lambda*} * theta1-scaling dx
// Equals (1/theta1) B((1+beta)/p, (p-1-alpha)/p) for every n.
double schur_weight_w1(const OperatorParams &params, std::uint64_t n, double rel_tol = 1e-9);

struct SchurW2 {
    double value;       // partial sum plus integral tail, certified upper path
    double partial_sum; // sum over n <= n_terms
    double tail_bound;  // integral bound on the remainder
};

// Column weight w2(x): summed over n with a monotone-tail integral closure.
// The summand decreases, so the estimate is certified below the closed bound
// (1/theta2) B((1+beta)/p, (p-1-alpha)/p).
SchurW2 schur_weight_w2(const OperatorParams &params, double x, std::uint64_t n_terms = 100000);

// theta2^{-1/p} theta1^{-1/q} B((1+beta)/p, (p-1-alpha)/p), at lambda = lambda*.
double sharp_norm(const OperatorParams &params);

// Matrix restriction kernels for the p = 2 operator norm.
struct MatrixKernel {
    enum class Kind { hilbert, parametric, measure } kind;
    OperatorParams params;             // parametric / measure
    std::vector<double> moment_table;  // measure: mu_lambda[s], s = 2 .. 2*n_max
    std::size_t n_max = 0;             // extent of the moment table
};

MatrixKernel hilbert_matrix_kernel();
MatrixKernel parametric_matrix_kernel(const OperatorParams &params);
MatrixKernel measure_matrix_kernel(const OperatorParams &params,
                                   const measures::UnitIntervalMeasure &mu, std::size_t n_max);

// Top singular value of the N x N truncation, matrix-free power iteration
// from the all-ones vector; deterministic. N <= 16384.
double p2_matrix_norm(const MatrixKernel &kernel, std::size_t N, double rel_tol = 1e-10,
                      std::size_t max_iterations = 100000);

} // namespace hilop::operators
