#pragma once

#include <stdexcept>
#include <string>

namespace sway {

/// Bad user-supplied quantity (non-positive length, negative mass, ...).
struct InvalidInput : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Evaluation outside the domain a function is defined on.
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

/// Scaling function touched zero or went negative; the frequency map is undefined.
struct DegenerateScaling : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Rope length reached zero (or the integrator gave up) while hoisting.
struct InfeasibleHoist : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Root finding exhausted its iteration budget.
struct NonConvergence : std::runtime_error {
    NonConvergence(const std::string& what, double r1, double r2)
        : std::runtime_error(what), best_residual_1(r1), best_residual_2(r2) {}
    double best_residual_1;
    double best_residual_2;
};

/// The 2x2 linear system fixing the transport parameters is singular.
struct DegenerateDesign : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Pendulum energy too high for a librating (back-and-forth) motion.
struct OverTheTop : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace sway
