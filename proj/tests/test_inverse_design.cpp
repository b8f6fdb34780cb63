#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "sway/dynamics.hpp"
#include "sway/errors.hpp"
#include "sway/inverse_design.hpp"
#include "sway/ode.hpp"

using namespace sway;

namespace {

ScenarioSpec hoist_scenario(double l0, double lf, double d, double tf) {
    ScenarioSpec spec;
    spec.l0 = l0;
    spec.lf = lf;
    spec.d = d;
    spec.tf = tf;
    return spec;
}

}  // namespace

TEST_CASE("constant scaling gives a constant frequency") {
    const auto b = build_scaling_profile(10.0, 10.0, 0.0, 0.0, 5.0);
    const double omega0 = std::sqrt(9.81 / 10.0);
    const FrequencyLaw omega2(b, omega0);
    for (double t : {0.0, 1.0, 3.3, 5.0})
        CHECK(omega2(t) == doctest::Approx(omega0 * omega0).epsilon(1e-14));
}

TEST_CASE("frequency matches both rope lengths at the boundary times") {
    const double l0 = 10.0, lf = 5.0, g = 9.81, tf = 10.0;
    const auto b = build_scaling_profile(l0, lf, 0.7, -0.3, tf);
    const FrequencyLaw omega2(b, std::sqrt(g / l0));
    CHECK(omega2(0.0) == doctest::Approx(g / l0).epsilon(1e-12));
    CHECK(omega2(tf) == doctest::Approx(g / lf).epsilon(1e-12));
}

TEST_CASE("frequency construction rejects a scaling that dips through zero") {
    const auto bad = build_scaling_profile(10.0, 5.0, 100.0, 0.0, 10.0);
    CHECK_THROWS_AS(FrequencyLaw(bad, 1.0), DegenerateScaling);
}

TEST_CASE("auxiliary ODE route reproduces the polynomial scaling") {
    // Independent route: treat the scaling equation bdd = omega0^2/b^3 -
    // omega^2 b as an ODE driven by the frequency we derived from the
    // polynomial, and check the solution lands back on the polynomial.
    const double l0 = 10.0, lf = 5.0, g = 9.81, tf = 10.0;
    const auto b = build_scaling_profile(l0, lf, 0.0, 0.0, tf);
    const double omega0 = std::sqrt(g / l0);
    const FrequencyLaw omega2(b, omega0);

    const OdeRhs rhs = [&](const OdeState& y, OdeState& dydt, double t) {
        dydt[0] = y[1];
        dydt[1] = omega0 * omega0 / (y[0] * y[0] * y[0]) - omega2(t) * y[0];
    };
    const auto grid = uniform_grid(tf, 101);
    const auto states = integrate_at_times(rhs, {1.0, 0.0}, grid);
    for (size_t i = 0; i < grid.size(); ++i)
        CHECK(states[i][0] == doctest::Approx(b.value(grid[i])).epsilon(1e-8));
}

TEST_CASE("rope stays put at the equilibrium frequency") {
    const double l0 = 10.0, g = 9.81;
    const auto sol = integrate_rope_length([&](double) { return g / l0; }, l0, 5.0, g);
    for (double l : sol.l) CHECK(l == doctest::Approx(l0).epsilon(1e-12));
    for (double v : sol.ldot) CHECK(std::fabs(v) < 1e-10);
}

TEST_CASE("hoist shoot is trivial when lengths match") {
    const auto solve = solve_hoist_parameters(hoist_scenario(10.0, 10.0, 0.0, 5.0));
    CHECK(solve.a6 == 0.0);
    CHECK(solve.a7 == 0.0);
    CHECK(solve.report.iterations == 0);
    CHECK(std::fabs(solve.report.rope_length_residual) < 1e-9);
    CHECK(std::fabs(solve.report.rope_velocity_residual) < 1e-9);
}

TEST_CASE("hoist shoot lands the rope on target") {
    const auto spec = hoist_scenario(10.0, 5.0, 0.0, 15.0);
    const auto solve = solve_hoist_parameters(spec);
    CHECK(solve.report.converged);
    CHECK(std::fabs(solve.report.rope_length_residual) < 1e-8);
    CHECK(std::fabs(solve.report.rope_velocity_residual) < 1e-9);

    const auto b = build_scaling_profile(spec.l0, spec.lf, solve.a6, solve.a7, spec.tf);
    const FrequencyLaw omega2(b, spec.omega0());
    const auto rope = integrate_rope_length(omega2, spec.l0, spec.tf, spec.g);
    CHECK(rope.l.back() == doctest::Approx(spec.lf).epsilon(1e-8));

    // Slow hoisting shrinks the rope essentially monotonically.
    for (size_t i = 1; i < rope.l.size(); ++i) CHECK(rope.l[i] <= rope.l[i - 1] + 1e-3);
    // End conditions of the smooth-operation set. The end curvature equals
    // -(g/lf)(l(tf) - lf), so it inherits the shoot tolerance times g/lf.
    CHECK(std::fabs(rope.ldot.front()) < 1e-12);
    CHECK(std::fabs(rope.ldot.back()) < 1e-9);
    CHECK(std::fabs(rope.lddot.front()) < 1e-9);
    CHECK(std::fabs(rope.lddot.back()) < 1e-7);
}

TEST_CASE("tightening the integrator leaves the shoot residuals in place") {
    const auto spec = hoist_scenario(5.0, 10.0, 0.0, 10.0);
    const auto solve = solve_hoist_parameters(spec);
    const auto b = build_scaling_profile(spec.l0, spec.lf, solve.a6, solve.a7, spec.tf);
    const FrequencyLaw omega2(b, spec.omega0());

    IntegrationOptions tight;
    tight.rel_tol = 1e-11;
    tight.abs_tol = 1e-13;
    const auto rope = integrate_rope_length(omega2, spec.l0, spec.tf, spec.g, tight);
    CHECK(std::fabs(rope.l.back() - spec.lf) < 1e-6);
    CHECK(std::fabs(rope.ldot.back()) < 1e-6);
}

TEST_CASE("constant-frequency transport parameters match the closed form") {
    const double l = 5.0, g = 9.81, d = 15.0, tf = 10.0;
    ScenarioSpec spec = hoist_scenario(l, l, d, tf);
    const double omega_sq = g / l;
    const auto solve = design_trolley({}, [&](double) { return omega_sq; }, spec);
    CHECK(solve.b6 == doctest::Approx(17640.0 * d / (tf * tf * omega_sq)).epsilon(1e-9));
    CHECK(solve.b7 == doctest::Approx(-5040.0 * d / (tf * tf * omega_sq)).epsilon(1e-9));
}

TEST_CASE("zero displacement keeps the trolley parked") {
    ScenarioSpec spec = hoist_scenario(10.0, 5.0, 0.0, 10.0);
    const auto hoist = solve_hoist_parameters(spec);
    const auto b = build_scaling_profile(spec.l0, spec.lf, hoist.a6, hoist.a7, spec.tf);
    const FrequencyLaw omega2(b, spec.omega0());
    const auto solve = design_trolley({}, [&](double t) { return omega2(t); }, spec);
    CHECK(solve.b6 == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(solve.b7 == doctest::Approx(0.0).epsilon(1e-12));
    for (double x : solve.x) CHECK(std::fabs(x) < 1e-12);
}

TEST_CASE("dual design meets every end condition") {
    const auto spec = hoist_scenario(10.0, 5.0, 15.0, 10.0);
    const auto protocol = design_dual_protocol(spec);
    const auto& traj = protocol.trajectory;

    CHECK(std::fabs(traj.l.front() - spec.l0) < 1e-12);
    CHECK(std::fabs(traj.l.back() - spec.lf) < 1e-8);
    CHECK(std::fabs(traj.x.front()) < 1e-12);
    CHECK(std::fabs(traj.x.back() - spec.d) < 1e-9);
    CHECK(std::fabs(traj.xdot.back()) < 1e-9);
    CHECK(std::fabs(traj.xddot.front()) < 1e-9);
    CHECK(std::fabs(traj.xddot.back()) < 1e-9);

    // Kinematic relation on every grid point.
    for (size_t i = 0; i < traj.t.size(); ++i) {
        const double residual = traj.omega2[i] * traj.l[i] - (traj.gravity - traj.lddot[i]);
        CHECK(std::fabs(residual) < 1e-8);
    }

    // Scaling equation residual, evaluated analytically along the design.
    const auto& b = protocol.scaling;
    const double w0 = spec.omega0();
    for (double t : uniform_grid(spec.tf, 401)) {
        const double bv = b.value(t);
        const double residual = b.evaluate(t, 2) + protocol.law->omega2(t) * bv -
                                w0 * w0 / (bv * bv * bv);
        CHECK(std::fabs(residual) < 1e-8);
    }
}

TEST_CASE("identity scenario designs the identity protocol") {
    const auto protocol = design_dual_protocol(hoist_scenario(10.0, 10.0, 0.0, 5.0));
    for (size_t i = 0; i < protocol.trajectory.t.size(); ++i) {
        CHECK(protocol.trajectory.l[i] == doctest::Approx(10.0).epsilon(1e-12));
        CHECK(std::fabs(protocol.trajectory.x[i]) < 1e-12);
    }
}

TEST_CASE("payload starting at equilibrium tracks the transport function") {
    const auto spec = hoist_scenario(10.0, 5.0, 15.0, 15.0);
    const auto protocol = design_dual_protocol(spec);
    const auto sim = simulate_harmonic(*protocol.law, 0.0, 0.0);
    for (size_t i = 0; i < sim.t.size(); ++i)
        CHECK(std::fabs(sim.q[i] - protocol.transport.value(sim.t[i])) < 1e-8);
    CHECK(std::fabs(sim.q.back()) < 1e-8);
    CHECK(std::fabs(sim.qdot.back()) < 1e-8);
}

TEST_CASE("dynamical invariant is conserved along harmonic solutions") {
    const auto spec = hoist_scenario(10.0, 5.0, 15.0, 10.0);
    const auto protocol = design_dual_protocol(spec);
    const auto* law = dynamic_cast<const DesignedControlLaw*>(protocol.law.get());
    REQUIRE(law != nullptr);
    const double m = 1.0, w0 = spec.omega0();

    std::mt19937 rng(7);
    std::uniform_real_distribution<double> qd(-0.5, 0.5);
    for (int trial = 0; trial < 4; ++trial) {
        const double q0 = qd(rng), p0 = qd(rng);
        const auto sim = simulate_harmonic(*protocol.law, q0, p0 / m);
        auto invariant = [&](size_t i) {
            const double t = sim.t[i];
            const double bv = protocol.scaling.value(t);
            const double bd = protocol.scaling.derivative(t);
            const double av = protocol.transport.value(t);
            const double ad = protocol.transport.derivative(t);
            const double p = m * sim.qdot[i];
            const double u = bv * (p - m * ad) - m * bd * (sim.q[i] - av);
            const double v = (sim.q[i] - av) / bv;
            return u * u / (2.0 * m) + 0.5 * m * w0 * w0 * v * v;
        };
        const double I0 = invariant(0);
        REQUIRE(I0 > 0.0);
        for (size_t i = 0; i < sim.t.size(); i += 50)
            CHECK(std::fabs(invariant(i) - I0) <= 1e-8 * I0);
    }
}

TEST_CASE("designed protocols deliver the adiabatic energy for any start") {
    const auto spec = hoist_scenario(10.0, 5.0, 15.0, 10.0);
    const auto protocol = design_dual_protocol(spec);
    const double ratio_expected = spec.omegaf() / spec.omega0();

    std::mt19937 rng(11);
    std::uniform_real_distribution<double> qd(-0.4, 0.4);
    for (int trial = 0; trial < 5; ++trial) {
        const double q0 = qd(rng), qdot0 = qd(rng);
        const auto sim = simulate_harmonic(*protocol.law, q0, qdot0);
        REQUIRE(sim.E0 > 0.0);
        CHECK(sim.Ef / sim.E0 == doctest::Approx(ratio_expected).epsilon(1e-6));
    }
}

TEST_CASE("sequential protocol splices cleanly and is order independent") {
    auto spec = hoist_scenario(5.0, 10.0, 15.0, 12.0);
    const double t_transport = 9.0, t_hoist = 3.0;
    const auto seq = design_sequential_protocol(spec, SequentialOrder::transport_first,
                                                t_transport, t_hoist);
    const auto& law = *seq.law;

    const double eps = 1e-9;
    const auto before_r = law.rope(t_transport - eps);
    const auto after_r = law.rope(t_transport + eps);
    CHECK(before_r.l == doctest::Approx(after_r.l).epsilon(1e-10));
    CHECK(std::fabs(before_r.ldot) < 1e-9);
    CHECK(std::fabs(after_r.ldot) < 1e-9);
    CHECK(std::fabs(before_r.lddot) < 1e-7);
    CHECK(std::fabs(after_r.lddot) < 1e-7);
    const auto before_c = law.trolley(t_transport - eps);
    const auto after_c = law.trolley(t_transport + eps);
    CHECK(before_c.x == doctest::Approx(after_c.x).epsilon(1e-10));
    CHECK(std::fabs(before_c.xdot) < 1e-8);
    CHECK(std::fabs(after_c.xdot) < 1e-8);
    CHECK(std::fabs(before_c.xddot) < 1e-7);
    CHECK(std::fabs(after_c.xddot) < 1e-7);

    const auto swapped = design_sequential_protocol(spec, SequentialOrder::hoist_first, t_transport,
                                                    t_hoist);
    const auto end_a = swapped.law->rope(spec.tf);
    const auto end_b = law.rope(spec.tf);
    CHECK(end_a.l == doctest::Approx(end_b.l).epsilon(1e-9));
    CHECK(swapped.law->trolley(spec.tf).x == doctest::Approx(law.trolley(spec.tf).x).epsilon(1e-9));

    CHECK_THROWS_AS(
        design_sequential_protocol(spec, SequentialOrder::transport_first, 5.0, 3.0),
        InvalidInput);
}

TEST_CASE("constant-frequency transports are similar across rope lengths") {
    const double d = 15.0, tf = 10.0, g = 9.81;
    auto design_at = [&](double l) {
        return design_dual_protocol(hoist_scenario(l, l, d, tf));
    };
    const auto at5 = design_at(5.0);
    const auto at35 = design_at(35.0);
    const double w5 = g / 5.0, w35 = g / 35.0;

    double max_scale_err = 0.0, max_ratio_err = 0.0, scale_mag = 0.0;
    for (double t : uniform_grid(tf, 501)) {
        const double a5 = at5.transport.value(t);
        const double a35 = at35.transport.value(t);
        max_scale_err = std::max(max_scale_err, std::fabs(w5 * a5 - w35 * a35));
        scale_mag = std::max(scale_mag, std::fabs(w5 * a5));
        max_ratio_err = std::max(max_ratio_err, std::fabs(a5 / 5.0 - a35 / 35.0));
    }
    CHECK(max_scale_err <= 1e-9 * scale_mag);
    CHECK(max_ratio_err <= 1e-9 * (scale_mag / w5 / 5.0));
}
