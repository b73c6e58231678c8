#pragma once

namespace hilop {

// Admissible parameter block for the parameterized kernel
//   k(x, n) = x^{-alpha*theta1} / (x^{theta1} + n^{theta2})^{lambda}
// with the conjugate-exponent weights attached by the operators module.
struct OperatorParams {
    double p = 2.0;
    double lambda = 1.0;
    double theta1 = 1.0;
    double theta2 = 1.0;
    double alpha = 0.0;
    double beta = 0.0;

    double q() const { return p / (p - 1.0); }
    double lambda_star() const { return 1.0 + (beta - alpha) / p; }
    bool at_critical_lambda(double tol = 1e-12) const;

    // Throws std::domain_error naming every violated constraint.
    void validate() const;
};

} // namespace hilop
