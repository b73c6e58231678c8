#include "hilop/extremal.hpp"

#include "hilop/errors.hpp"
#include "hilop/parallel.hpp"
#include "hilop/quadrature.hpp"
#include "hilop/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace hilop::extremal {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

// 15-point Gauss-Kronrod nodes/weights on [-1, 1] for the fixed unit-width
// panels of the step-block series (smooth integrands, no adaptivity needed).
constexpr double xgk[8] = {
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691, 0.7415311855993944,
    0.5860872354676911, 0.4058451513773972, 0.2077849550078985, 0.0,
};
constexpr double wgk[8] = {
    0.02293532201052922, 0.06309209262997855, 0.1047900103222502, 0.1406532597155259,
    0.1690047266392679,  0.1903505780647854,  0.2044329400752989, 0.2094821410847278,
};

} // namespace

double ExtremalFamily::sequence_value(std::uint64_t n) const {
    if (kind != FamilyKind::step_weights)
        throw std::domain_error("sequence_value: only the step_weights family is a sequence");
    if (n == 0) throw std::domain_error("sequence_value: n starts at 1");
    const double q = p / (p - 1.0);
    const double w = parameter;
    return std::pow(1.0 - w * w, 1.0 / q) * std::pow(w, 2.0 * (static_cast<double>(n) - 1.0) / q);
}

ExtremalFamily build_family(FamilyKind kind, double parameter, double p, double theta1) {
    if (!(p > 1.0)) throw std::domain_error("build_family: requires p > 1");
    switch (kind) {
    case FamilyKind::power_tail: {
        const double eps = parameter;
        if (!(eps > 0.0)) throw std::domain_error("build_family: eps must be positive");
        if (!(theta1 > 0.0 && theta1 <= 1.0))
            throw std::domain_error("build_family: theta1 must lie in (0, 1]");
        PiecewisePowerFunction f({{1.0, inf, std::pow(eps, 1.0 / p), -(1.0 + theta1 * eps) / p}});
        return {kind, p, eps, theta1, std::move(f), std::pow(theta1, -1.0 / p)};
    }
    case FamilyKind::unit_power: {
        const double eps = parameter;
        if (!(eps > 0.0)) throw std::domain_error("build_family: eps must be positive");
        PiecewisePowerFunction f({{1.0, inf, std::pow(eps, 1.0 / p), -(1.0 + eps) / p}});
        return {kind, p, eps, 1.0, std::move(f), 1.0};
    }
    case FamilyKind::step_blocks: {
        const double w = parameter;
        if (!(w > 0.0 && w < 1.0)) throw std::domain_error("build_family: w must lie in (0, 1)");
        const double c0 = std::pow(1.0 - w * w, 1.0 / p);
        const double step = std::pow(w, 2.0 / p);
        std::vector<PowerPiece> pieces;
        double c = c0;
        for (std::uint64_t k = 1; c >= 1e-18 * c0; ++k) {
            pieces.push_back({static_cast<double>(k), static_cast<double>(k + 1), c, 0.0});
            c *= step;
            if (k > 3'000'000)
                throw std::domain_error("build_family: w too close to 1 for the block family");
        }
        return {kind, p, w, 1.0, PiecewisePowerFunction(std::move(pieces)), 1.0};
    }
    case FamilyKind::step_weights: {
        const double w = parameter;
        if (!(w > 0.0 && w < 1.0)) throw std::domain_error("build_family: w must lie in (0, 1)");
        return {kind, p, w, 1.0, PiecewisePowerFunction(), 1.0};
    }
    }
    throw std::domain_error("build_family: unknown family kind");
}

double L_epsilon(const OperatorParams &params, double eps) {
    params.validate();
    if (!(eps > 0.0 && eps < params.p - 1.0 - params.alpha))
        throw std::domain_error("L_epsilon: requires 0 < eps < p - 1 - alpha");
    return specfun::beta((1.0 + params.beta + eps) / params.p,
                         (params.p - 1.0 - params.alpha - eps) / params.p);
}

namespace {

// Analytic completion of sum_{n > N} v_n^p for the power_tail family at the
// critical lambda. The image satisfies
//   v_n^p = eps * theta1^{-p} n^{-1 - eps*theta2} (L - U(n))^p,
//   U(n)  = sum_{i>=0} c_i n^{-theta2 (kappa + i)},  kappa = (p-1-alpha-eps)/p,
//   c_i   = binom(-lambda*, i) / (kappa + i),
// and each power of n is completed by an exact zeta tail. The binomial series
// of (L - U)^p terminates for integer p and converges geometrically otherwise.
double completed_tail_sum(const OperatorParams &params, double eps, std::uint64_t N, double L) {
    const double p = params.p, th1 = params.theta1, th2 = params.theta2;
    const double lam = params.lambda_star();
    const double kappa = (p - 1.0 - params.alpha - eps) / p;

    double c[3];
    double binom_neg = 1.0; // binom(-lambda*, i)
    for (int i = 0; i < 3; ++i) {
        c[i] = binom_neg / (kappa + i);
        binom_neg *= (-lam - i) / (i + 1.0);
    }

    auto zeta_tail = [N](double s) { return specfun::power_zeta_tail(s, N).total(); };

    const double u_scale = c[0] * std::pow(static_cast<double>(N), -th2 * kappa);
    if (!(std::abs(u_scale) < 0.5 * L))
        throw non_convergence_error("rayleigh tail completion: window too short for the expansion");

    const double base = 1.0 + eps * th2;
    double total = 0.0;
    double binom_p = 1.0; // binom(p, j), via the recurrence
    for (int j = 0; j <= 64; ++j) {
        const double sign = (j % 2 == 0) ? 1.0 : -1.0;
        const double Lpow = std::pow(L, p - j);
        // U^j expanded to second order in y = n^{-theta2}
        double u0 = 1.0, u1 = 0.0, u2 = 0.0;
        if (j >= 1) {
            u0 = std::pow(c[0], j);
            u1 = j * std::pow(c[0], j - 1) * c[1];
            u2 = j * std::pow(c[0], j - 1) * c[2] +
                 0.5 * j * (j - 1.0) * std::pow(c[0], j - 2) * c[1] * c[1];
        }
        const double jk = j * th2 * kappa;
        const double term = sign * binom_p * Lpow *
                            (u0 * zeta_tail(base + jk) +
                             u1 * zeta_tail(base + jk + th2) +
                             u2 * zeta_tail(base + jk + 2.0 * th2));
        total += term;
        if (j >= 2 && std::abs(term) < 1e-15 * std::abs(total)) break;
        binom_p *= (p - j) / (j + 1.0);
        if (binom_p == 0.0) break; // integer p: the expansion is exact and finite
    }
    return eps * std::pow(th1, -p) * total;
}

} // namespace

RayleighBound rayleigh_lower_bound(const OperatorParams &params, double eps, std::uint64_t N,
                                   double rel_tol, unsigned jobs) {
    params.validate();
    if (!params.at_critical_lambda(1e-9))
        throw std::domain_error("rayleigh_lower_bound: run at lambda = lambda_star");
    if (N < 1000)
        throw std::domain_error("rayleigh_lower_bound: N >= 1000 needed for the completion");
    const double L = L_epsilon(params, eps); // also validates the eps range

    const ExtremalFamily fam = build_family(FamilyKind::power_tail, eps, params.p, params.theta1);
    const operators::SequenceWindow win =
        operators::apply_parametric_window(params, fam.function, N, rel_tol, jobs);

    double body = 0.0;
    for (double v : win.values) body += std::pow(v, params.p);

    const operators::SequencePowerTail fit = operators::fit_power_tail(win.values);
    const double sigma_analytic = (1.0 + eps * params.theta2) / params.p;
    if (std::abs(fit.sigma - sigma_analytic) > 0.08 * sigma_analytic)
        throw non_convergence_error(
            "rayleigh_lower_bound: fitted tail index " + std::to_string(fit.sigma) +
            " deviates from the analytic index " + std::to_string(sigma_analytic));

    const double tail = completed_tail_sum(params, eps, N, L);
    const double total = body + tail;
    const double value = std::pow(total, 1.0 / params.p) / fam.exact_norm;
    return {value, fit.sigma, sigma_analytic, tail / total};
}

DivergenceFit divergence_exponent_fit(const OperatorParams &params, double eps,
                                      const std::vector<std::uint64_t> &ladder,
                                      double rel_tol, unsigned jobs) {
    params.validate();
    if (!(params.lambda < params.lambda_star() - 1e-12))
        throw std::domain_error("divergence_exponent_fit: requires lambda < lambda_star");
    if (ladder.size() < 2 || ladder.front() < 10)
        throw std::domain_error("divergence_exponent_fit: ladder needs >= 2 points from N >= 10");
    for (std::size_t i = 1; i < ladder.size(); ++i)
        if (ladder[i] <= ladder[i - 1])
            throw std::domain_error("divergence_exponent_fit: ladder must increase");

    const double predicted =
        params.p * params.theta2 * (params.lambda_star() - params.lambda) - params.theta2 * eps;
    if (!(predicted > 0.0))
        throw std::domain_error("divergence_exponent_fit: eps too large, no growth predicted");

    const ExtremalFamily fam = build_family(FamilyKind::power_tail, eps, params.p, params.theta1);
    const operators::SequenceWindow win =
        operators::apply_parametric_window(params, fam.function, ladder.back(), rel_tol, jobs);

    DivergenceFit out;
    out.predicted_delta = predicted;
    double running = 0.0;
    std::size_t next = 0;
    for (std::uint64_t n = 1; n <= ladder.back(); ++n) {
        running += std::pow(win.values[n - 1], params.p);
        if (next < ladder.size() && n == ladder[next]) {
            double slope = 0.0;
            if (!out.points.empty()) {
                const ScanPoint &prev = out.points.back();
                slope = (std::log(running) - std::log(prev.S_N)) /
                        (std::log(static_cast<double>(n)) - std::log(static_cast<double>(prev.N)));
            }
            out.points.push_back({n, running, slope});
            ++next;
        }
    }

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const ScanPoint &pt : out.points) {
        const double lx = std::log(static_cast<double>(pt.N));
        const double ly = std::log(pt.S_N);
        sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
    }
    const double m = static_cast<double>(out.points.size());
    out.fitted_delta = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    return out;
}

namespace {

// A(t) = (1-w^2)^{1/q} sum_{n>=1} n^{beta/p} w^{2(n-1)/q} t^n
double weight_series(double t, double w, double p, double q, double beta) {
    if (!(t > 0.0)) return 0.0;
    const double rho = std::pow(w, 2.0 / q) * t;
    const double power = beta / p;
    const double peak = power > 0.0 ? power / -std::log(rho) : 0.0;
    double acc = 0.0, rho_pow = 1.0;
    for (std::uint64_t n = 1;; ++n) {
        const double term = std::pow(static_cast<double>(n), power) * rho_pow;
        acc += term;
        rho_pow *= rho;
        if (static_cast<double>(n) > peak && term < 1e-16 * acc) {
            const double nd = static_cast<double>(n);
            const double grow = power > 0.0 ? std::pow((nd + 1.0) / nd, power) : 1.0;
            if (rho * grow < 1.0) acc += term * rho * grow / (1.0 - rho * grow);
            break;
        }
        if (n > 20'000'000)
            throw non_convergence_error("duality_pairing: weight series did not settle");
    }
    return std::pow(1.0 - w * w, 1.0 / q) * t * acc;
}

// One block integral int_k^{k+1} x^{-alpha/p} t^{x-1} dx; closed form when
// alpha = 0, fixed 15-point panel otherwise (the integrand is smooth).
double block_integral(double t, std::uint64_t k, double alpha_over_p) {
    const double d = 1.0 - t;
    const double logt = std::log1p(-d); // ln t, stable near 1
    if (alpha_over_p == 0.0) {
        // int_k^{k+1} t^{x-1} dx = t^{k-1} (t - 1) / ln t
        return std::exp((static_cast<double>(k) - 1.0) * logt) * (d / -logt);
    }
    const double c = static_cast<double>(k) + 0.5;
    auto g = [logt, alpha_over_p](double x) {
        return std::exp(-alpha_over_p * std::log(x) + (x - 1.0) * logt);
    };
    double acc = g(c) * wgk[7];
    for (int j = 0; j < 7; ++j)
        acc += wgk[j] * (g(c - 0.5 * xgk[j]) + g(c + 0.5 * xgk[j]));
    return acc * 0.5;
}

// B(t) = (1-w^2)^{1/p} sum_{k>=1} w^{2(k-1)/p} int_k^{k+1} x^{-alpha/p} t^{x-1} dx
double block_series(double t, double w, double p, double alpha) {
    if (!(t > 0.0)) return 0.0;
    const double step = std::pow(w, 2.0 / p);
    const double ap = alpha / p;
    double acc = 0.0, w_pow = 1.0;
    for (std::uint64_t k = 1;; ++k) {
        const double term = w_pow * block_integral(t, k, ap);
        acc += term;
        w_pow *= step;
        const double ratio = step * t; // term ratio bound: the block factor shrinks by >= t
        if (term < 1e-16 * acc || term == 0.0) {
            if (ratio < 1.0) acc += term * ratio / (1.0 - ratio);
            break;
        }
        if (k > 20'000'000)
            throw non_convergence_error("duality_pairing: block series did not settle");
    }
    return std::pow(1.0 - w * w, 1.0 / p) * acc;
}

} // namespace

DualityResult duality_pairing(const OperatorParams &params,
                              const measures::UnitIntervalMeasure &mu, double w) {
    params.validate();
    if (!(w > 0.0 && w < 1.0)) throw std::domain_error("duality_pairing: requires 0 < w < 1");

    const measures::UnitIntervalMeasure nu = measures::shift_density(mu, params.lambda - 1.0);
    const double surrogate = nu.tail(w) / std::pow(1.0 - w * w, params.lambda_star());
    if (nu.is_zero()) return {0.0, surrogate};

    const double p = params.p, q = params.q();
    auto AB = [&](double t) {
        return weight_series(t, w, p, q, params.beta) * block_series(t, w, p, params.alpha);
    };

    double pairing = 0.0;
    for (const measures::Atom &a : nu.atoms()) pairing += a.mass * AB(a.t);
    for (const measures::DensityPiece &piece : nu.pieces()) {
        auto g = [&](double t) { return piece.coeff * std::pow(1.0 - t, piece.expo) * AB(t); };
        // A(t) vanishes linearly at 0; the series' log-scale variation is mild.
        const double left = piece.a == 0.0 ? 1.0 : 0.0;
        const double right = piece.b == 1.0 ? piece.expo : 0.0;
        pairing += quadrature::integrate_interval(g, piece.a, piece.b, left, right, 1e-8).value;
    }
    return {pairing, surrogate};
}

BlowupLadder boundary_gamma_blowup(double p, double gamma, const std::vector<double> &eps_ladder) {
    if (!(p > 1.0)) throw std::domain_error("boundary_gamma_blowup: requires p > 1");
    if (gamma < -1.0) return {true, {}};
    if (gamma > -1.0 && gamma < p - 1.0)
        throw std::domain_error("boundary_gamma_blowup: gamma inside (-1, p-1) is the bounded regime");

    BlowupLadder out{false, {}};
    for (double eps : eps_ladder) {
        if (!(eps > 0.0))
            throw std::domain_error("boundary_gamma_blowup: eps must be positive");
        const double a = (1.0 + gamma + eps) / p;
        auto g = [a](double t) { return std::exp(-a * std::log(t)) / (1.0 + t); };
        // The exponent a sits just above 0 at the bottom of the ladder, so
        // t^{-a-1} keeps mass beyond double range and a plain tail quadrature
        // cannot certify it. Split at T: the head is a smooth quadrature, the
        // rest expands 1/(1+t) geometrically into an alternating series
        //   int_T^inf t^{-a}/(1+t) dt = sum_j (-1)^j T^{-(a+j)} / (a+j).
        const double T = 4.0;
        double C = quadrature::integrate_interval(g, 1.0, T, 0.0, 0.0, 1e-12).value;
        double sign = 1.0, power = std::pow(T, -a);
        for (int j = 0; j < 300; ++j) {
            const double term = sign * power / (a + static_cast<double>(j));
            C += term;
            if (std::abs(term) < 1e-17 * C) break;
            sign = -sign;
            power /= T;
        }
        out.values.emplace_back(eps, std::pow(C, p) / eps);
    }
    return out;
}

operators::SequenceWindow hardy_coefficient_sequence(const PiecewisePowerFunction &f,
                                                     std::size_t N, double rel_tol) {
    if (N == 0) throw std::domain_error("hardy_coefficient_sequence: N must be at least 1");
    operators::SequenceWindow out;
    out.values.assign(N, 0.0);
    for (std::size_t i = 0; i < N; ++i) {
        const double shift = static_cast<double>(i) + 1.0;
        double total = 0.0;
        for (const PowerPiece &pc : f.pieces()) {
            if (pc.coeff == 0.0) continue;
            auto g = [&pc, shift](double x) {
                return pc.coeff * std::pow(x, pc.expo) / (x + shift);
            };
            if (pc.a == 0.0 && !(pc.expo > -1.0))
                throw divergence_error("hardy_coefficient_sequence: exponent <= -1 at 0");
            const double decay = 1.0 - pc.expo;
            if (pc.b == inf && !(decay > 1.0))
                throw divergence_error("hardy_coefficient_sequence: nonintegrable tail");
            if (pc.a == 0.0 && pc.b == inf) {
                total += quadrature::integrate_half_line({g, pc.expo, decay}, rel_tol).value;
            } else if (pc.b == inf) {
                total += quadrature::integrate_tail(g, pc.a, decay, rel_tol).value;
            } else {
                total += quadrature::integrate_interval(g, pc.a, pc.b,
                                                        pc.a == 0.0 ? pc.expo : 0.0, 0.0, rel_tol)
                             .value;
            }
        }
        out.values[i] = total;
    }
    return out;
}

} // namespace hilop::extremal
