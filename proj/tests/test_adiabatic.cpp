#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "sway/adiabatic.hpp"
#include "sway/errors.hpp"

using namespace sway;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Plain composite Simpson on a fixed fine grid; the tests' own quadrature,
// independent of the library's adaptive routine.
template <typename F>
double simpson(const F& f, double a, double b, int n) {
    const double h = (b - a) / n;
    double acc = f(a) + f(b);
    for (int i = 1; i < n; ++i) acc += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

}  // namespace

TEST_CASE("elliptic e reduces to known special parameters") {
    CHECK(incomplete_elliptic_e(0.7, 0.0) == doctest::Approx(0.7).epsilon(1e-15));
    CHECK(incomplete_elliptic_e(0.5 * kPi, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("elliptic e above unit parameter matches direct quadrature") {
    // E(0.6 | 2) stays real because 2 sin^2(theta) < 1 on [0, 0.6].
    const double direct =
        simpson([](double t) { return std::sqrt(1.0 - 2.0 * std::sin(t) * std::sin(t)); }, 0.0,
                0.6, 4096);
    CHECK(incomplete_elliptic_e(0.6, 2.0) == doctest::Approx(direct).epsilon(1e-10));
}

TEST_CASE("elliptic e rejects unreachable arguments") {
    CHECK_THROWS_AS(incomplete_elliptic_e(0.6, -1.0), DomainError);
    CHECK_THROWS_AS(incomplete_elliptic_e(1.2, 2.0), DomainError);  // sqrt(2) sin(1.2) > 1
}

TEST_CASE("invariant area approaches the harmonic action for small angles") {
    const double l = 2.0, m = 1.5, g = 9.81;
    for (double theta : {1e-2, 1e-3}) {
        const double harmonic = kPi * m * theta * theta * std::pow(l, 1.5) * std::sqrt(g);
        const double area = invariant_area(l, theta, m, g);
        CHECK(std::fabs(area / harmonic - 1.0) < theta * theta);
    }
}

TEST_CASE("quadrature and elliptic paths agree across the swing range") {
    const double m = 1.0, g = 9.81;
    for (double l : {1.0, 5.0, 20.0}) {
        for (double theta = 0.01; theta <= 3.0; theta += 0.115) {
            const double a_quad = invariant_area(l, theta, m, g);
            const double a_ell = invariant_area_elliptic(l, theta, m, g);
            CHECK(std::fabs(a_quad - a_ell) <= 1e-8 * a_ell);
        }
    }
}

TEST_CASE("area scales as l to the three halves") {
    const double theta = 0.8, m = 1.0, g = 9.81;
    const double a1 = invariant_area(1.0, theta, m, g);
    const double a4 = invariant_area(4.0, theta, m, g);
    CHECK(a4 / a1 == doctest::Approx(8.0).epsilon(1e-10));
}

TEST_CASE("area grows with both the angle and the length") {
    const double m = 1.0, g = 9.81;
    double prev = 0.0;
    for (double theta = 0.1; theta <= 3.0; theta += 0.1) {
        const double a = invariant_area(5.0, theta, m, g);
        CHECK(a > prev);
        prev = a;
    }
    prev = 0.0;
    for (double l = 0.5; l <= 30.0; l += 1.5) {
        const double a = invariant_area(l, 0.7, m, g);
        CHECK(a > prev);
        prev = a;
    }
}

TEST_CASE("area rejects non-librating angles") {
    CHECK_THROWS_AS(invariant_area(1.0, 0.0, 1.0, 9.81), DomainError);
    CHECK_THROWS_AS(invariant_area(1.0, kPi, 1.0, 9.81), DomainError);
}

TEST_CASE("adiabatic angle is the identity at equal lengths") {
    CHECK(adiabatic_final_angle(7.0, 7.0, 0.4) == doctest::Approx(0.4).epsilon(1e-15));
}

TEST_CASE("adiabatic angle follows the three-quarters power law for small angles") {
    // Small-oscillation limit theta_f = theta_0 (l0/lf)^{3/4}; hoisting 10 -> 5.
    const double ratio_expected = std::pow(2.0, 0.75);
    CHECK(ratio_expected == doctest::Approx(1.681792).epsilon(1e-6));

    double prev_err = 1.0;
    for (double theta0 : {2e-2, 1e-2, 5e-3}) {
        const double theta_f = adiabatic_final_angle(10.0, 5.0, theta0);
        const double err = std::fabs(theta_f / (theta0 * ratio_expected) - 1.0);
        CHECK(err < theta0 * theta0);
        CHECK(err < prev_err);
        prev_err = err;
    }

    const double one_deg = 1.0 * kPi / 180.0;
    CHECK(adiabatic_final_angle(10.0, 5.0, one_deg) / one_deg ==
          doctest::Approx(ratio_expected).epsilon(0.02));
    CHECK(adiabatic_final_angle(5.0, 10.0, one_deg) / one_deg ==
          doctest::Approx(std::pow(0.5, 0.75)).epsilon(0.02));
}

TEST_CASE("hoisting amplifies while lowering damps") {
    const double theta0 = 0.3;
    CHECK(adiabatic_final_angle(10.0, 5.0, theta0) > theta0);
    CHECK(adiabatic_final_angle(5.0, 10.0, theta0) < theta0);
}

TEST_CASE("adiabatic angle round-trips between lengths") {
    // Hoisting amplifies, so the start angle must stay low enough for the
    // short rope to still librate; lowering has no such ceiling.
    for (double theta0 : {0.05, 0.4, 1.1}) {
        const double there = adiabatic_final_angle(10.0, 5.0, theta0);
        const double back = adiabatic_final_angle(5.0, 10.0, there);
        CHECK(std::fabs(back - theta0) < 1e-9);
    }
    for (double theta0 : {1.8, 2.6}) {
        const double there = adiabatic_final_angle(5.0, 10.0, theta0);
        const double back = adiabatic_final_angle(10.0, 5.0, there);
        CHECK(std::fabs(back - theta0) < 1e-9);
    }
}

TEST_CASE("adiabatic angle refuses areas beyond libration") {
    // Lifting a near-inverted swing to a much shorter rope has no librating image.
    CHECK_THROWS_AS(adiabatic_final_angle(10.0, 0.1, 3.1), OverTheTop);
}

TEST_CASE("small-oscillation adiabatic energy is the frequency ratio") {
    CHECK(adiabatic_energy_small_osc(2.0, 1.4, 1.4) == doctest::Approx(2.0).epsilon(1e-15));
    // omega scales as 1/sqrt(l): halving the length gives sqrt(2).
    const double w0 = std::sqrt(9.81 / 10.0), wf = std::sqrt(9.81 / 5.0);
    CHECK(adiabatic_energy_small_osc(1.0, w0, wf) ==
          doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK_THROWS_AS(adiabatic_energy_small_osc(1.0, 0.0, 1.0), InvalidInput);
}

TEST_CASE("finite-angle oracle converges to the small-oscillation energy") {
    const double l0 = 10.0, lf = 5.0, m = 1.0, g = 9.81;
    const double w0 = std::sqrt(g / l0), wf = std::sqrt(g / lf);
    for (double theta0 : {1e-2, 3e-3}) {
        const double e0 = pendulum_energy_at_angle(l0, theta0, m, g);
        const double theta_f = adiabatic_final_angle(l0, lf, theta0, m, g);
        const double ef = pendulum_energy_at_angle(lf, theta_f, m, g);
        const double e_ad = adiabatic_energy_small_osc(e0, w0, wf);
        CHECK(std::fabs(ef / e_ad - 1.0) < theta0 * theta0);
    }
}
