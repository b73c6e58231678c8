#pragma once

#include <vector>

namespace hilop {

// coeff * x^expo on (a, b]; b may be +infinity (only on the last piece).
struct PowerPiece {
    double a, b, coeff, expo;
};

// Finitely many disjoint power pieces on (0, inf); zero elsewhere.
class PiecewisePowerFunction {
public:
    PiecewisePowerFunction() = default;
    explicit PiecewisePowerFunction(std::vector<PowerPiece> pieces);

    double operator()(double x) const;

    // Exact ||f||_p from the closed-form piece integrals. Throws
    // divergence_error if any piece contributes an infinite amount.
    double norm_lp(double p) const;

    const std::vector<PowerPiece> &pieces() const { return pieces_; }
    bool empty() const { return pieces_.empty(); }

    // ca*f + cb*g, valid when on every overlap the exponents coincide.
    static PiecewisePowerFunction scaled_sum(double ca, const PiecewisePowerFunction &f,
                                             double cb, const PiecewisePowerFunction &g);

private:
    std::vector<PowerPiece> pieces_;
};

} // namespace hilop
