#include "hilop/piecewise_power.hpp"

#include "hilop/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

namespace hilop {

namespace {
constexpr double inf = std::numeric_limits<double>::infinity();
}

PiecewisePowerFunction::PiecewisePowerFunction(std::vector<PowerPiece> pieces)
    : pieces_(std::move(pieces)) {
    std::sort(pieces_.begin(), pieces_.end(),
              [](const PowerPiece &l, const PowerPiece &r) { return l.a < r.a; });
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
        const PowerPiece &p = pieces_[i];
        if (!(p.a >= 0.0) || !(p.b > p.a))
            throw std::domain_error("PiecewisePowerFunction: pieces need 0 <= a < b");
        if (!std::isfinite(p.coeff) || !std::isfinite(p.expo))
            throw std::domain_error("PiecewisePowerFunction: coefficient and exponent must be finite");
        if (p.b == inf && i + 1 != pieces_.size())
            throw std::domain_error("PiecewisePowerFunction: only the last piece may be unbounded");
        if (i > 0 && pieces_[i - 1].b > p.a)
            throw std::domain_error("PiecewisePowerFunction: pieces overlap");
    }
}

double PiecewisePowerFunction::operator()(double x) const {
    if (!(x > 0.0)) return 0.0;
    auto it = std::upper_bound(pieces_.begin(), pieces_.end(), x,
                               [](double v, const PowerPiece &p) { return v < p.a; });
    if (it == pieces_.begin()) return 0.0;
    --it;
    if (x <= it->a || x > it->b) return 0.0;
    return it->coeff * std::pow(x, it->expo);
}

double PiecewisePowerFunction::norm_lp(double p) const {
    if (!(p >= 1.0)) throw std::domain_error("norm_lp: requires p >= 1");
    double total = 0.0;
    for (const PowerPiece &pc : pieces_) {
        if (pc.coeff == 0.0) continue;
        const double cp = std::pow(std::abs(pc.coeff), p);
        const double pe = p * pc.expo;
        if (pc.b == inf) {
            if (!(pe < -1.0))
                throw divergence_error("norm_lp: unbounded piece with exponent*p >= -1");
            total += cp * std::pow(pc.a, pe + 1.0) / (-1.0 - pe);
        } else if (pe == -1.0) {
            if (pc.a == 0.0) throw divergence_error("norm_lp: log piece reaching 0");
            total += cp * std::log(pc.b / pc.a);
        } else {
            if (pc.a == 0.0 && pe < -1.0)
                throw divergence_error("norm_lp: piece reaching 0 with exponent*p <= -1");
            const double hi = std::pow(pc.b, pe + 1.0);
            const double lo = pc.a == 0.0 ? 0.0 : std::pow(pc.a, pe + 1.0);
            total += cp * (hi - lo) / (pe + 1.0);
        }
    }
    return std::pow(total, 1.0 / p);
}

PiecewisePowerFunction PiecewisePowerFunction::scaled_sum(double ca, const PiecewisePowerFunction &f,
                                                          double cb, const PiecewisePowerFunction &g) {
    std::vector<double> cuts;
    for (const auto &p : f.pieces_) { cuts.push_back(p.a); cuts.push_back(p.b); }
    for (const auto &p : g.pieces_) { cuts.push_back(p.a); cuts.push_back(p.b); }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    auto covering = [](const PiecewisePowerFunction &h, double lo, double hi) -> std::optional<PowerPiece> {
        for (const auto &p : h.pieces_)
            if (p.a <= lo && hi <= p.b) return p;
        return std::nullopt;
    };

    std::vector<PowerPiece> out;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double lo = cuts[i], hi = cuts[i + 1];
        const auto pf = covering(f, lo, hi);
        const auto pg = covering(g, lo, hi);
        if (!pf && !pg) continue;
        double coeff = 0.0, expo = 0.0;
        if (pf && pg) {
            if (pf->expo != pg->expo)
                throw std::domain_error("scaled_sum: overlapping pieces with different exponents");
            expo = pf->expo;
            coeff = ca * pf->coeff + cb * pg->coeff;
        } else if (pf) {
            expo = pf->expo;
            coeff = ca * pf->coeff;
        } else {
            expo = pg->expo;
            coeff = cb * pg->coeff;
        }
        if (coeff != 0.0) out.push_back({lo, hi, coeff, expo});
    }
    return PiecewisePowerFunction(std::move(out));
}

} // namespace hilop
