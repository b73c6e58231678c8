#include "hilop/operators.hpp"

#include "hilop/errors.hpp"
#include "hilop/parallel.hpp"
#include "hilop/quadrature.hpp"
#include "hilop/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace hilop::operators {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

// Exponent of the full integrand x^A near 0 for one power piece:
// kernel weight plus x^{-alpha*theta1} plus the piece's own exponent.
double piece_zero_exponent(const OperatorParams &pr, double piece_expo) {
    return (pr.theta1 - 1.0 + pr.alpha * pr.theta1) / pr.q() - pr.alpha * pr.theta1 + piece_expo;
}

} // namespace

SequencePowerTail fit_power_tail(const std::vector<double> &values) {
    const std::size_t N = values.size();
    if (N < 20) throw std::domain_error("fit_power_tail: needs at least 20 entries");
    const std::size_t start = std::max<std::size_t>(1, N / 10); // last decade, 1-based
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t count = 0;
    for (std::size_t n = start; n <= N; ++n) {
        const double v = values[n - 1];
        if (!(v > 0.0))
            throw std::domain_error("fit_power_tail: nonpositive entry inside the fit range");
        const double lx = std::log(static_cast<double>(n));
        const double ly = std::log(v);
        sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
        ++count;
    }
    const double denom = count * sxx - sx * sx;
    const double slope = (count * sxy - sx * sy) / denom;
    const double intercept = (sy - slope * sx) / count;
    return {-slope, std::exp(intercept)};
}

CompletedNorm lp_norm_completed(const SequenceWindow &window, double p) {
    if (!(p >= 1.0)) throw std::domain_error("lp_norm_completed: requires p >= 1");
    double body = 0.0;
    for (double v : window.values) body += std::pow(std::abs(v), p);
    double tail_part = 0.0;
    if (window.tail) {
        const double sp = window.tail->sigma * p;
        if (!(sp > 1.0))
            throw divergence_error("lp_norm_completed: fitted tail has sigma*p <= 1, not summable");
        tail_part = std::pow(window.tail->K, p) *
                    specfun::power_zeta_tail(sp, window.values.size()).total();
    }
    const double total = body + tail_part;
    return {std::pow(total, 1.0 / p), total > 0.0 ? tail_part / total : 0.0};
}

double apply_parametric(const OperatorParams &params, const PiecewisePowerFunction &f,
                        std::uint64_t n, double rel_tol) {
    params.validate();
    if (n == 0) throw std::domain_error("apply_parametric: n starts at 1");
    const double nd = static_cast<double>(n);
    const double weight = std::pow(nd, ((params.theta2 - 1.0) + params.beta * params.theta2) / params.p);
    const double nt2 = std::pow(nd, params.theta2);
    const double th1 = params.theta1, lam = params.lambda;

    double total = 0.0;
    for (const PowerPiece &pc : f.pieces()) {
        if (pc.coeff == 0.0) continue;
        const double A = piece_zero_exponent(params, pc.expo);
        auto g = [&pc, A, th1, lam, nt2](double x) {
            return pc.coeff * std::exp(A * std::log(x) - lam * std::log(std::pow(x, th1) + nt2));
        };
        if (pc.a == 0.0 && !(A > -1.0))
            throw divergence_error("apply_parametric: integrand exponent at 0 is " +
                                   std::to_string(A) + " <= -1 on a piece reaching 0");
        const double decay = th1 * lam - A;
        if (pc.b == inf && !(decay > 1.0))
            throw divergence_error("apply_parametric: integrand decays like x^{-" +
                                   std::to_string(decay) + "} on an unbounded piece, diverges");

        quadrature::QuadratureResult r;
        if (pc.a == 0.0 && pc.b == inf) {
            r = quadrature::integrate_half_line({g, A, decay}, rel_tol);
        } else if (pc.b == inf) {
            r = quadrature::integrate_tail(g, pc.a, decay, rel_tol);
        } else {
            r = quadrature::integrate_interval(g, pc.a, pc.b, pc.a == 0.0 ? A : 0.0, 0.0, rel_tol);
        }
        total += r.value;
    }
    return weight * total;
}

SequenceWindow apply_parametric_window(const OperatorParams &params, const PiecewisePowerFunction &f,
                                       std::uint64_t N, double rel_tol, unsigned jobs) {
    if (N == 0) throw std::domain_error("apply_parametric_window: N must be at least 1");
    SequenceWindow out;
    out.values.assign(N, 0.0);
    parallel_for(0, N, jobs, [&](std::size_t i) {
        out.values[i] = apply_parametric(params, f, i + 1, rel_tol);
    });
    return out;
}

double apply_measure_kernel(const OperatorParams &params, const measures::UnitIntervalMeasure &mu,
                            const PiecewisePowerFunction &f, std::uint64_t n, double rel_tol) {
    params.validate();
    if (n == 0) throw std::domain_error("apply_measure_kernel: n starts at 1");
    if (mu.is_zero()) return 0.0;
    const double nd = static_cast<double>(n);
    const double ap = params.alpha / params.p;
    const double lam = params.lambda;

    // Kernel decay in x: a density piece touching 1 gives mu_lambda[x+n] an
    // algebraic tail x^{-(lambda + expo)}; pure-atom measures decay
    // exponentially, which any large stated power underestimates safely.
    double kernel_decay = 100.0;
    for (const auto &p : mu.pieces())
        if (p.b == 1.0) kernel_decay = lam + p.expo;

    const double inner_tol = std::min(1e-10, rel_tol * 0.1);
    double total = 0.0;
    for (const PowerPiece &pc : f.pieces()) {
        if (pc.coeff == 0.0) continue;
        const double A = pc.expo - ap;
        auto g = [&mu, &pc, A, lam, nd, inner_tol](double x) {
            return pc.coeff * std::pow(x, A) * measures::moment(mu, x + nd, lam, inner_tol);
        };
        if (pc.a == 0.0 && !(A > -1.0))
            throw divergence_error("apply_measure_kernel: exponent at 0 is <= -1");
        const double decay = kernel_decay - A;
        if (pc.b == inf && !(decay > 1.0))
            throw divergence_error("apply_measure_kernel: unbounded piece with nonintegrable tail");

        quadrature::QuadratureResult r;
        if (pc.a == 0.0 && pc.b == inf) {
            r = quadrature::integrate_half_line({g, A, decay}, rel_tol);
        } else if (pc.b == inf) {
            r = quadrature::integrate_tail(g, pc.a, decay, rel_tol);
        } else {
            r = quadrature::integrate_interval(g, pc.a, pc.b, pc.a == 0.0 ? A : 0.0, 0.0, rel_tol);
        }
        total += r.value;
    }
    return std::pow(nd, params.beta / params.p) * total;
}

double schur_weight_w1(const OperatorParams &params, std::uint64_t n, double rel_tol) {
    params.validate();
    if (!params.at_critical_lambda(1e-9))
        throw std::domain_error("schur_weight_w1: defined at lambda = lambda_star only");
    if (n == 0) throw std::domain_error("schur_weight_w1: n starts at 1");
    const double nd = static_cast<double>(n);
    const double nt2 = std::pow(nd, params.theta2);
    const double th1 = params.theta1;
    const double lam = params.lambda_star();
    const double a_exp = th1 * (params.p - 1.0 - params.alpha) / params.p - 1.0;
    auto g = [a_exp, th1, lam, nt2](double x) {
        return std::exp(a_exp * std::log(x) - lam * std::log(std::pow(x, th1) + nt2));
    };
    const double decay = th1 * lam - a_exp;
    const double scale = std::pow(nd, params.theta2 * (1.0 + params.beta) / params.p);
    return scale * quadrature::integrate_half_line({g, a_exp, decay}, rel_tol).value;
}

SchurW2 schur_weight_w2(const OperatorParams &params, double x, std::uint64_t n_terms) {
    params.validate();
    if (!params.at_critical_lambda(1e-9))
        throw std::domain_error("schur_weight_w2: defined at lambda = lambda_star only");
    if (!(x > 0.0)) throw std::domain_error("schur_weight_w2: requires x > 0");
    if (n_terms < 8) throw std::domain_error("schur_weight_w2: n_terms too small");

    const double th2 = params.theta2;
    const double lam = params.lambda_star();
    const double xt1 = std::pow(x, params.theta1);
    const double x_scale = std::pow(x, params.theta1 * (params.p - 1.0 - params.alpha) / params.p);
    const double u_exp = th2 - 1.0 - th2 * (params.p - 1.0 - params.beta) / params.p;
    auto h = [th2, lam, xt1, x_scale, u_exp](double u) {
        return x_scale * std::exp(u_exp * std::log(u) - lam * std::log(xt1 + std::pow(u, th2)));
    };

    double partial = 0.0;
    std::uint64_t m = 0;
    for (std::uint64_t i = 1; i <= n_terms; ++i) {
        const double term = h(static_cast<double>(i));
        partial += term;
        m = i;
        if (i >= 64 && term < 1e-17 * partial) break;
    }
    // h decreases, so sum_{n>m} h(n) <= int_m^inf h(u) du and the total stays
    // below the full integral bound.
    const double decay = 1.0 + th2 * (params.p - 1.0 - params.alpha) / params.p;
    const double tail =
        quadrature::integrate_tail(h, static_cast<double>(m), decay, 1e-10).value;
    return {partial + tail, partial, tail};
}

double sharp_norm(const OperatorParams &params) {
    params.validate();
    if (!params.at_critical_lambda(1e-9))
        throw std::domain_error("sharp_norm: the closed form holds at lambda = lambda_star only");
    const double b = specfun::beta((1.0 + params.beta) / params.p,
                                   (params.p - 1.0 - params.alpha) / params.p);
    return std::pow(params.theta2, -1.0 / params.p) * std::pow(params.theta1, -1.0 / params.q()) * b;
}

MatrixKernel hilbert_matrix_kernel() { return {MatrixKernel::Kind::hilbert, {}, {}, 0}; }

MatrixKernel parametric_matrix_kernel(const OperatorParams &params) {
    params.validate();
    return {MatrixKernel::Kind::parametric, params, {}, 0};
}

MatrixKernel measure_matrix_kernel(const OperatorParams &params,
                                   const measures::UnitIntervalMeasure &mu, std::size_t n_max) {
    params.validate();
    if (n_max == 0 || n_max > 16384)
        throw std::domain_error("measure_matrix_kernel: n_max must lie in [1, 16384]");
    MatrixKernel k{MatrixKernel::Kind::measure, params, {}, n_max};
    k.moment_table.reserve(2 * n_max - 1);
    for (std::size_t s = 2; s <= 2 * n_max; ++s)
        k.moment_table.push_back(measures::moment(mu, static_cast<double>(s), params.lambda));
    return k;
}

double p2_matrix_norm(const MatrixKernel &kernel, std::size_t N, double rel_tol,
                      std::size_t max_iterations) {
    if (N == 0 || N > 16384)
        throw std::domain_error("p2_matrix_norm: N must lie in [1, 16384]");
    if (kernel.kind == MatrixKernel::Kind::measure && N > kernel.n_max)
        throw std::domain_error("p2_matrix_norm: N exceeds the kernel's moment table");

    // Entry tables: k(m, n) = row[m] * col[n] * core(m, n).
    std::vector<double> row(N, 1.0), col(N, 1.0), mt1(N, 0.0), mt2(N, 0.0);
    const OperatorParams &pr = kernel.params;
    if (kernel.kind == MatrixKernel::Kind::parametric) {
        for (std::size_t i = 0; i < N; ++i) {
            const double m = static_cast<double>(i + 1);
            row[i] = std::pow(m, ((pr.theta2 - 1.0) + pr.beta * pr.theta2) / 2.0);
            col[i] = std::pow(m, (pr.theta1 - 1.0 + pr.alpha * pr.theta1) / 2.0 - pr.alpha * pr.theta1);
            mt1[i] = std::pow(m, pr.theta1);
            mt2[i] = std::pow(m, pr.theta2);
        }
    } else if (kernel.kind == MatrixKernel::Kind::measure) {
        for (std::size_t i = 0; i < N; ++i) {
            const double m = static_cast<double>(i + 1);
            row[i] = std::pow(m, pr.beta / 2.0);
            col[i] = std::pow(m, -pr.alpha / 2.0);
        }
    }

    auto entry = [&](std::size_t i, std::size_t j) -> double {
        switch (kernel.kind) {
        case MatrixKernel::Kind::hilbert:
            return 1.0 / static_cast<double>(i + j + 2);
        case MatrixKernel::Kind::parametric:
            return row[i] * col[j] * std::pow(mt1[j] + mt2[i], -pr.lambda);
        case MatrixKernel::Kind::measure:
            return row[i] * col[j] * kernel.moment_table[i + j];
        }
        return 0.0;
    };

    const bool symmetric = kernel.kind == MatrixKernel::Kind::hilbert;
    std::vector<double> v(N, 1.0 / std::sqrt(static_cast<double>(N)));
    std::vector<double> y(N, 0.0), z(N, 0.0);

    auto matvec = [&](const std::vector<double> &in, std::vector<double> &out, bool transpose) {
        if (kernel.kind == MatrixKernel::Kind::hilbert) {
            for (std::size_t i = 0; i < N; ++i) {
                double acc = 0.0;
                for (std::size_t j = 0; j < N; ++j)
                    acc += in[j] / static_cast<double>(i + j + 2);
                out[i] = acc;
            }
            return;
        }
        for (std::size_t i = 0; i < N; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < N; ++j)
                acc += in[j] * (transpose ? entry(j, i) : entry(i, j));
            out[i] = acc;
        }
    };

    auto norm2 = [](const std::vector<double> &u) {
        double s = 0.0;
        for (double x : u) s += x * x;
        return std::sqrt(s);
    };

    double prev = 0.0;
    for (std::size_t it = 1; it <= max_iterations; ++it) {
        matvec(v, y, false);
        const double est = norm2(y); // ||Mv|| with ||v|| = 1
        if (est == 0.0) return 0.0;
        if (symmetric) {
            for (std::size_t i = 0; i < N; ++i) v[i] = y[i] / est;
        } else {
            matvec(y, z, true);
            const double nz = norm2(z);
            if (nz == 0.0) return est;
            for (std::size_t i = 0; i < N; ++i) v[i] = z[i] / nz;
        }
        if (it > 1 && std::abs(est - prev) <= rel_tol * est) return est;
        prev = est;
    }
    throw non_convergence_error("p2_matrix_norm: power iteration did not settle in " +
                                std::to_string(max_iterations) + " iterations");
}

} // namespace hilop::operators
