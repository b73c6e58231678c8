#include "hilop/measures.hpp"

#include "hilop/errors.hpp"
#include "hilop/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace hilop::measures {

namespace {

double piece_tail(const DensityPiece &p, double t) {
    // int_{max(a,t)}^{b} coeff (1-u)^expo du
    const double lo = std::max(p.a, t);
    if (lo >= p.b) return 0.0;
    const double e1 = p.expo + 1.0;
    const double hi_part = std::pow(1.0 - p.b, e1); // b == 1 gives 0 since e1 > 0
    const double lo_part = std::pow(1.0 - lo, e1);
    return p.coeff / e1 * (lo_part - hi_part);
}

// Same integral with the cut given as a distance from 1.
double piece_tail_at_distance(const DensityPiece &p, double s) {
    const double s_lo = std::min(1.0 - p.a, s);
    const double s_hi = 1.0 - p.b;
    if (s_lo <= s_hi) return 0.0;
    const double e1 = p.expo + 1.0;
    return p.coeff / e1 * (std::pow(s_lo, e1) - std::pow(s_hi, e1));
}

} // namespace

UnitIntervalMeasure::UnitIntervalMeasure(std::vector<Atom> atoms, std::vector<DensityPiece> pieces)
    : atoms_(std::move(atoms)), pieces_(std::move(pieces)) {
    std::sort(atoms_.begin(), atoms_.end(), [](const Atom &l, const Atom &r) { return l.t < r.t; });
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
        const Atom &a = atoms_[i];
        if (!(a.t > 0.0 && a.t < 1.0))
            throw std::domain_error("UnitIntervalMeasure: atom location must lie in (0, 1)");
        if (!(a.mass > 0.0))
            throw std::domain_error("UnitIntervalMeasure: atom mass must be positive");
        if (i > 0 && atoms_[i - 1].t == a.t)
            throw std::domain_error("UnitIntervalMeasure: duplicate atom location");
    }
    std::sort(pieces_.begin(), pieces_.end(),
              [](const DensityPiece &l, const DensityPiece &r) { return l.a < r.a; });
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
        const DensityPiece &p = pieces_[i];
        if (!(p.a >= 0.0 && p.a < p.b && p.b <= 1.0))
            throw std::domain_error("UnitIntervalMeasure: density piece needs 0 <= a < b <= 1");
        if (!(p.coeff > 0.0))
            throw std::domain_error("UnitIntervalMeasure: density coefficient must be positive");
        if (!(p.expo > -1.0))
            throw divergence_error("UnitIntervalMeasure: density exponent <= -1 has infinite mass");
        if (i > 0 && pieces_[i - 1].b > p.a)
            throw std::domain_error("UnitIntervalMeasure: density pieces overlap");
    }
}

double UnitIntervalMeasure::tail(double t) const {
    if (t >= 1.0) return 0.0;
    double total = 0.0;
    for (const Atom &a : atoms_)
        if (a.t >= t) total += a.mass;
    for (const DensityPiece &p : pieces_) total += piece_tail(p, t);
    return total;
}

double UnitIntervalMeasure::tail_at_distance(double s) const {
    if (s <= 0.0) return 0.0;
    double total = 0.0;
    for (const Atom &a : atoms_)
        if (1.0 - a.t <= s) total += a.mass;
    for (const DensityPiece &p : pieces_) total += piece_tail_at_distance(p, s);
    return total;
}

UnitIntervalMeasure shift_density(const UnitIntervalMeasure &mu, double r) {
    std::vector<Atom> atoms;
    atoms.reserve(mu.atoms().size());
    for (const Atom &a : mu.atoms()) atoms.push_back({a.t, a.mass * std::pow(1.0 - a.t, r)});
    std::vector<DensityPiece> pieces;
    pieces.reserve(mu.pieces().size());
    for (const DensityPiece &p : mu.pieces()) {
        if (!(p.expo + r > -1.0))
            throw divergence_error("shift_density: shifted exponent falls to -1 or below");
        pieces.push_back({p.a, p.b, p.coeff, p.expo + r});
    }
    return UnitIntervalMeasure(std::move(atoms), std::move(pieces));
}

std::vector<double> default_grid() {
    std::vector<double> g;
    g.reserve(41);
    double step = 1.0;
    for (int k = 0; k <= 40; ++k) {
        g.push_back(1.0 - step);
        step *= 0.5;
    }
    return g;
}

CarlesonProfile carleson_profile(const UnitIntervalMeasure &mu, double s,
                                 const std::vector<double> &grid) {
    if (!(s > 0.0)) throw std::domain_error("carleson_profile: requires s > 0");
    if (grid.size() < 5) throw std::domain_error("carleson_profile: grid needs at least 5 points");
    CarlesonProfile out;
    out.exponent = s;
    out.constant = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double t = grid[i];
        if (!(t >= 0.0 && t < 1.0) || (i > 0 && t <= grid[i - 1]))
            throw std::domain_error("carleson_profile: grid must increase within [0, 1)");
        const double ratio = mu.tail(t) / std::pow(1.0 - t, s);
        out.samples.emplace_back(t, ratio);
        out.constant = std::max(out.constant, ratio);
    }

    const std::size_t n = out.samples.size();
    bool vanishing = true;
    bool growing = true;
    for (std::size_t i = n - 5; i + 1 < n; ++i) {
        const double cur = out.samples[i].second, nxt = out.samples[i + 1].second;
        if (nxt > cur || (nxt == cur && cur > 0.0)) vanishing = false;
        if (!(nxt > cur)) growing = false;
    }
    const double last = out.samples[n - 1].second;
    if (!(last < 0.01 * out.constant)) vanishing = false;
    if (out.constant == 0.0) vanishing = true; // zero measure vanishes trivially
    out.vanishing_verdict = vanishing;
    out.growth_trend = growing && last > 4.0 * out.samples[n - 5].second;
    return out;
}

double moment(const UnitIntervalMeasure &mu, double z, double lambda, double rel_tol) {
    if (!(z > 0.0)) throw std::domain_error("moment: requires z > 0");
    if (!(lambda > 0.0)) throw std::domain_error("moment: requires lambda > 0");
    double total = 0.0;
    for (const Atom &a : mu.atoms())
        total += a.mass * std::exp((z - 1.0) * std::log(a.t) + (lambda - 1.0) * std::log1p(-a.t));
    for (const DensityPiece &p : mu.pieces()) {
        const double e = lambda - 1.0 + p.expo;
        if (p.b == 1.0 && !(e > -1.0))
            throw divergence_error("moment: density reaching 1 with exponent <= -1 diverges");
        // Each half is integrated in the variable that reaches its endpoint
        // exactly: t below 1/2, the distance s = 1-t above. Otherwise the
        // (1-t)^e factor near 1 is quantized to machine steps and a singular
        // exponent there loses most of its digits.
        if (p.a < 0.5) {
            auto h = [&p, z, e](double t) {
                return p.coeff * std::exp((z - 1.0) * std::log(t) + e * std::log1p(-t));
            };
            const double left = p.a == 0.0 ? z - 1.0 : 0.0;
            total +=
                quadrature::integrate_interval(h, p.a, std::min(p.b, 0.5), left, 0.0, rel_tol)
                    .value;
        }
        if (p.b > 0.5) {
            auto h = [&p, z, e](double s) {
                return p.coeff * std::exp((z - 1.0) * std::log1p(-s) + e * std::log(s));
            };
            const double s_lo = 1.0 - p.b;
            const double s_hi = 1.0 - std::max(p.a, 0.5);
            const double left = p.b == 1.0 ? e : 0.0;
            total += quadrature::integrate_interval(h, s_lo, s_hi, left, 0.0, rel_tol).value;
        }
    }
    return total;
}

double moment_via_parts(const UnitIntervalMeasure &mu, double z, double lambda, double rel_tol) {
    if (!(z > 1.0))
        throw std::domain_error("moment_via_parts: the parts identity needs z > 1");
    if (!(lambda > 0.0)) throw std::domain_error("moment_via_parts: requires lambda > 0");
    const UnitIntervalMeasure nu = shift_density(mu, lambda - 1.0);
    if (nu.is_zero()) return 0.0;

    std::set<double> cut_set{0.0, 1.0};
    for (const Atom &a : nu.atoms()) cut_set.insert(a.t);
    double support_end = 0.0;
    for (const Atom &a : nu.atoms()) support_end = std::max(support_end, a.t);
    for (const DensityPiece &p : nu.pieces()) {
        cut_set.insert(p.a);
        cut_set.insert(p.b);
        support_end = std::max(support_end, p.b);
    }
    const std::vector<double> cuts(cut_set.begin(), cut_set.end());

    double end_expo = 0.0; // tail decay of nu at 1, if its support reaches 1
    if (!nu.pieces().empty() && nu.pieces().back().b == 1.0)
        end_expo = nu.pieces().back().expo + 1.0;

    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double lo = cuts[i], hi = cuts[i + 1];
        if (lo >= support_end) break; // the tail vanishes from here on
        // Same half-and-half treatment as moment(): the upper part runs in
        // the distance s = 1-t so the tail near 1 keeps its digits.
        if (lo < 0.5) {
            auto g = [&nu, z](double t) { return std::pow(t, z - 2.0) * nu.tail(t); };
            const double left = lo == 0.0 ? z - 2.0 : 0.0;
            total += quadrature::integrate_interval(g, lo, std::min(hi, 0.5), left, 0.0, rel_tol)
                         .value;
        }
        if (hi > 0.5) {
            auto g = [&nu, z](double s) {
                return std::exp((z - 2.0) * std::log1p(-s)) * nu.tail_at_distance(s);
            };
            const double s_lo = 1.0 - hi;
            const double s_hi = 1.0 - std::max(lo, 0.5);
            const double left = hi == 1.0 ? end_expo : 0.0;
            total += quadrature::integrate_interval(g, s_lo, s_hi, left, 0.0, rel_tol).value;
        }
    }
    return (z - 1.0) * total;
}

std::vector<DecaySample> moment_decay_profile(const UnitIntervalMeasure &mu, double lambda,
                                              double s, double x, std::uint64_t n_max) {
    if (!(x >= 0.0)) throw std::domain_error("moment_decay_profile: requires x >= 0");
    if (!(n_max >= 1)) throw std::domain_error("moment_decay_profile: requires n_max >= 1");

    std::set<std::uint64_t> ns;
    for (std::uint64_t n = 1; n <= std::min<std::uint64_t>(100, n_max); ++n) ns.insert(n);
    for (double g = 100.0; g < static_cast<double>(n_max); g *= 1.25)
        ns.insert(static_cast<std::uint64_t>(std::llround(g)));
    for (std::uint64_t d = 10; d <= n_max; d *= 10) ns.insert(d); // keep round anchors
    ns.insert(n_max);
    while (!ns.empty() && *ns.rbegin() > n_max) ns.erase(std::prev(ns.end()));

    std::vector<DecaySample> out;
    out.reserve(ns.size());
    for (std::uint64_t n : ns) {
        const double zn = x + static_cast<double>(n);
        out.push_back({n, moment(mu, zn, lambda) * std::pow(zn, s)});
    }
    return out;
}

ShiftEquivalenceReport carleson_shift_equivalence_check(const UnitIntervalMeasure &mu, double s,
                                                        double r, const std::vector<double> &grid) {
    if (!(s > std::abs(r)))
        throw std::domain_error("carleson_shift_equivalence_check: requires s > |r|");
    ShiftEquivalenceReport rep{
        carleson_profile(mu, s, grid),
        carleson_profile(shift_density(mu, r), s + r, grid),
        false,
    };
    rep.verdicts_agree = (rep.base.growth_trend == rep.shifted.growth_trend);
    return rep;
}

} // namespace hilop::measures
