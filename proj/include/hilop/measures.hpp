#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace hilop::measures {

// Point mass at t in (0, 1).
struct Atom {
    double t, mass;
};

// Density coeff * (1-t)^expo on [a, b) with 0 <= a < b <= 1, expo > -1.
struct DensityPiece {
    double a, b, coeff, expo;
};

// Finite positive Borel measure on [0, 1) built from atoms and power-of-(1-t)
// density pieces. Rich enough for every construction in this toolkit while
// keeping tails and moments exactly computable or cheaply integrable.
class UnitIntervalMeasure {
public:
    UnitIntervalMeasure() = default;
    UnitIntervalMeasure(std::vector<Atom> atoms, std::vector<DensityPiece> pieces);

    // mu([t, 1)), exact closed form. t <= 0 gives the total mass.
    double tail(double t) const;

    // mu([1-s, 1)) with the distance s = 1-t passed directly, so tails tiny
    // compared to rounding on t keep full relative precision.
    double tail_at_distance(double s) const;

    double total_mass() const { return tail(0.0); }

    const std::vector<Atom> &atoms() const { return atoms_; }
    const std::vector<DensityPiece> &pieces() const { return pieces_; }
    bool is_zero() const { return atoms_.empty() && pieces_.empty(); }

private:
    std::vector<Atom> atoms_;
    std::vector<DensityPiece> pieces_;
};

// Measure (1-t)^r dmu. Throws divergence_error if a resulting density
// exponent falls to -1 or below.
UnitIntervalMeasure shift_density(const UnitIntervalMeasure &mu, double r);

// Sample grid t_k = 1 - 2^{-k}, k = 0..40.
std::vector<double> default_grid();

struct CarlesonProfile {
    double exponent;                                // s
    double constant;                                // sup of the sampled ratios
    std::vector<std::pair<double, double>> samples; // (t, tail(t)/(1-t)^s)
    bool vanishing_verdict;                         // ratios die out along the grid
    bool growth_trend;                              // ratios keep climbing at the end
};

// Ratios mu([t,1))/(1-t)^s over the grid. The vanishing verdict requires the
// last five ratios to be nonincreasing, strictly decreasing wherever positive,
// and to end below 1% of the sampled constant.
CarlesonProfile carleson_profile(const UnitIntervalMeasure &mu, double s,
                                 const std::vector<double> &grid = default_grid());

// mu_lambda[z] = int t^{z-1} (1-t)^{lambda-1} dmu(t), z > 0, lambda > 0.
double moment(const UnitIntervalMeasure &mu, double z, double lambda, double rel_tol = 1e-10);

// Same moment evaluated through integration by parts against the tail of the
// shifted measure; valid for z > 1. Independent computational route.
double moment_via_parts(const UnitIntervalMeasure &mu, double z, double lambda,
                        double rel_tol = 1e-10);

struct DecaySample {
    std::uint64_t n;
    double ratio; // mu_lambda[x+n] * (x+n)^s
};

// Moment decay along n: dense for n <= 100, geometric subsample beyond
// (always including powers of ten) up to n_max.
std::vector<DecaySample> moment_decay_profile(const UnitIntervalMeasure &mu, double lambda,
                                              double s, double x, std::uint64_t n_max);

struct ShiftEquivalenceReport {
    CarlesonProfile base;    // mu against (1-t)^s
    CarlesonProfile shifted; // (1-t)^r dmu against (1-t)^{s+r}
    bool verdicts_agree;     // boundedness trend matches
};

// Standard-window comparison: mu is s-bounded iff (1-t)^r dmu is (s+r)-bounded.
// Requires s > |r| so both exponents stay positive.
ShiftEquivalenceReport carleson_shift_equivalence_check(const UnitIntervalMeasure &mu, double s,
                                                        double r,
                                                        const std::vector<double> &grid = default_grid());

} // namespace hilop::measures
