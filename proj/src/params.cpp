#include "hilop/params.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace hilop {

bool OperatorParams::at_critical_lambda(double tol) const {
    return std::abs(lambda - lambda_star()) <= tol * std::max(1.0, std::abs(lambda_star()));
}

void OperatorParams::validate() const {
    std::string errs;
    auto fail = [&errs](const std::string &msg) {
        if (!errs.empty()) errs += "; ";
        errs += msg;
    };
    if (!(p > 1.0)) fail("p must exceed 1");
    if (!(lambda > 0.0)) fail("lambda must be positive");
    if (!(theta1 > 0.0 && theta1 <= 1.0)) fail("theta1 must lie in (0, 1]");
    if (!(theta2 > 0.0 && theta2 <= 1.0)) fail("theta2 must lie in (0, 1]");
    if (p > 1.0) {
        if (!(alpha > -1.0 && alpha < p - 1.0)) fail("alpha must lie in (-1, p-1)");
        if (!(beta > -1.0 && beta < p - 1.0)) fail("beta must lie in (-1, p-1)");
    }
    if (!errs.empty()) throw std::domain_error("OperatorParams: " + errs);
}

} // namespace hilop
