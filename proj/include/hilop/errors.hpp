#pragma once

#include <stdexcept>
#include <string>

namespace hilop {

// An integral or series provably diverges for the requested parameters.
class divergence_error : public std::runtime_error {
public:
    explicit divergence_error(const std::string &what) : std::runtime_error(what) {}
};

// An iterative scheme exhausted its budget above the requested tolerance.
class non_convergence_error : public std::runtime_error {
public:
    explicit non_convergence_error(const std::string &what) : std::runtime_error(what) {}
};

} // namespace hilop
