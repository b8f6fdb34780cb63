#pragma once

#include <span>
#include <string>
#include <vector>

namespace sway {

enum class ProfileUnit { dimensionless, meters };

std::string to_string(ProfileUnit unit);

/// Polynomial in the normalized time S = t / tf. Evaluation in S keeps the
/// coefficients well conditioned for long durations; an order-k derivative
/// picks up a 1/tf^k factor.
///
/// Immutable after construction, safe for concurrent reads.
class PolynomialProfile {
public:
    /// Constant zero on a unit duration; placeholder for aggregates.
    PolynomialProfile() : coefficients_{0.0}, tf_(1.0), unit_(ProfileUnit::dimensionless) {}
    PolynomialProfile(std::vector<double> coefficients, double tf, ProfileUnit unit);

    /// Value (order 0) or time derivative of order 1..3 at time t in [0, tf].
    /// Throws DomainError outside the interval (a 1e-9 relative slack absorbs
    /// integrator round-off at the endpoints).
    double evaluate(double t, int order = 0) const;

    double value(double t) const { return evaluate(t, 0); }
    double derivative(double t) const { return evaluate(t, 1); }
    double second_derivative(double t) const { return evaluate(t, 2); }

    const std::vector<double>& coefficients() const { return coefficients_; }
    double duration() const { return tf_; }
    ProfileUnit unit() const { return unit_; }
    int degree() const { return static_cast<int>(coefficients_.size()) - 1; }

private:
    std::vector<double> coefficients_;  // coefficients_[j] multiplies S^j
    double tf_;
    ProfileUnit unit_;
};

/// Free function mirroring the profile's evaluation contract.
double evaluate(const PolynomialProfile& profile, double t, int order = 0);

/// Scaling ratio gamma = (lf/l0)^{1/4}, the target end value of the scaling
/// function when the frequency follows sqrt(g/l).
double scaling_gamma(double l0, double lf);

/// Degree-7 scaling ansatz b(t): b(0)=1, b(tf)=gamma, and first and second
/// derivatives vanishing at both ends for every choice of the free top
/// coefficients (a6, a7).
PolynomialProfile build_scaling_profile(double l0, double lf, double a6, double a7, double tf);

/// Degree-7 transport ansatz alpha(t) with value and first two derivatives
/// vanishing at both ends for every (b6, b7). Value carries meters.
PolynomialProfile build_transport_profile(double b6, double b7, double tf);

/// Transport ansatz with extra monomials S^8, S^9, ... appended; the S^3..S^5
/// coefficients are re-solved linearly so the six end conditions keep holding
/// identically for all parameter values.
PolynomialProfile build_extended_transport_profile(double b6, double b7,
                                                   std::span<const double> extras, double tf);

}  // namespace sway
