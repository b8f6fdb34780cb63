#include "sway/adiabatic.hpp"

#include <cmath>
#include <utility>

#include <boost/math/special_functions/ellint_1.hpp>
#include <boost/math/special_functions/ellint_2.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "sway/errors.hpp"

namespace sway {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Adaptive Simpson with recursion on the Richardson error estimate. The
// integrands here are smooth after substitution, so depth stays shallow.
template <typename F>
double adaptive_simpson_rec(const F& f, double a, double b, double fa, double fm, double fb,
                            double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::fabs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

template <typename F>
double adaptive_simpson(const F& f, double a, double b, double tol) {
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, 40);
}

void check_area_inputs(double l, double theta_max, double m_load, double g) {
    if (!(l > 0.0) || !(m_load > 0.0) || !(g > 0.0))
        throw InvalidInput("area needs positive length, mass and gravity");
    if (!(theta_max > 0.0) || !(theta_max < kPi))
        throw DomainError("turning angle must lie in (0, pi)");
}

}  // namespace

double incomplete_elliptic_e(double phi, double v) {
    if (v < 0.0) throw DomainError("elliptic parameter must be non-negative");
    if (v == 0.0) return phi;
    if (v <= 1.0) return boost::math::ellint_2(std::sqrt(v), phi);

    // Reciprocal-modulus reduction to parameter 1/v in (0, 1):
    //   E(phi | v) = sqrt(v) E(psi | 1/v) - ((v - 1)/sqrt(v)) F(psi | 1/v),
    // with sin(psi) = sqrt(v) sin(phi).
    const double root_v = std::sqrt(v);
    const double s = root_v * std::sin(phi);
    if (s > 1.0 + 1e-12)
        throw DomainError("elliptic argument outside the reducible domain");
    const double psi = std::asin(std::min(s, 1.0));
    const double k = 1.0 / root_v;  // modulus of the reduced integrals
    return root_v * boost::math::ellint_2(k, psi) -
           (v - 1.0) / root_v * boost::math::ellint_1(k, psi);
}

double invariant_area(double l, double theta_max, double m_load, double g) {
    check_area_inputs(l, theta_max, m_load, g);
    const double c = std::cos(theta_max);
    // J = int_0^theta_max sqrt(cos t - cos theta_max) dt, after
    // cos t = c + (1 - c) u^2 and u = sin(psi):
    const double one_minus_c = 1.0 - c;
    auto integrand = [&](double psi) {
        const double sp = std::sin(psi);
        const double den_sq = 1.0 + c + one_minus_c * sp * sp;
        if (!(den_sq > 0.0)) return 0.0;  // psi = 0 with theta_max at pi rounds to 0/0
        return 2.0 * one_minus_c * sp * sp / std::sqrt(den_sq);
    };
    const double scale = 2.0 * one_minus_c;  // integrand magnitude
    const double J = adaptive_simpson(integrand, 0.0, 0.5 * kPi, 1e-14 * std::max(scale, 1e-6));
    return 4.0 * std::sqrt(2.0) * m_load * std::sqrt(g) * std::pow(l, 1.5) * J;
}

double invariant_area_elliptic(double l, double theta_max, double m_load, double g) {
    check_area_inputs(l, theta_max, m_load, g);
    const double c = std::cos(theta_max);
    const double e = incomplete_elliptic_e(0.5 * theta_max, 2.0 / (1.0 - c));
    return 8.0 * std::sqrt(2.0) * m_load * std::sqrt(g) * std::pow(l, 1.5) *
           std::sqrt(1.0 - c) * e;
}

double adiabatic_final_angle(double l0, double lf, double theta_max0, double m_load, double g) {
    if (!(l0 > 0.0) || !(lf > 0.0)) throw InvalidInput("rope lengths must be positive");
    if (!(theta_max0 > 0.0) || !(theta_max0 < kPi))
        throw DomainError("initial turning angle must lie in (0, pi)");
    if (l0 == lf) return theta_max0;

    const double target = invariant_area(l0, theta_max0, m_load, g);
    // Largest angle whose cosine is still distinguishable from -1 in double.
    const double hi = kPi - 1e-7;
    if (!(invariant_area(lf, hi, m_load, g) > target))
        throw OverTheTop("adiabatic area exceeds the largest librating area at lf");

    auto f = [&](double theta) { return invariant_area(lf, theta, m_load, g) - target; };
    boost::math::tools::eps_tolerance<double> tol(48);
    std::uintmax_t max_iter = 200;
    const auto bracket = boost::math::tools::toms748_solve(f, 1e-14, hi, tol, max_iter);
    return 0.5 * (bracket.first + bracket.second);
}

double adiabatic_energy_small_osc(double E0, double omega0, double omegaf) {
    if (!(omega0 > 0.0) || !(omegaf > 0.0)) throw InvalidInput("frequencies must be positive");
    return E0 * omegaf / omega0;
}

double pendulum_energy_at_angle(double l, double theta_max, double m_load, double g) {
    return m_load * g * l * (1.0 - std::cos(theta_max));
}

}  // namespace sway
