#include "sway/dynamics.hpp"

#include <cmath>
#include <limits>

#include "sway/errors.hpp"

namespace sway {

namespace {

constexpr double kPi = 3.14159265358979323846;

double frozen_max_angle(double theta, double thetadot, double l, double g, bool* over_the_top) {
    const double cos_max = std::cos(theta) - l * thetadot * thetadot / (2.0 * g);
    if (cos_max <= 0.0) {
        if (over_the_top != nullptr) *over_the_top = true;
        return std::numeric_limits<double>::quiet_NaN();
    }
    if (over_the_top != nullptr) *over_the_top = false;
    return std::acos(std::min(cos_max, 1.0));
}

void finalize_energies(SimulationResult& r) {
    r.E0 = r.energy.front();
    r.Ef = r.energy.back();
}

}  // namespace

SimulationResult simulate_exact(const ControlLaw& law, double theta0, double thetadot0,
                                const SimOptions& opts) {
    const double g = law.gravity();
    const OdeRhs rhs = [&](const OdeState& y, OdeState& dydt, double t) {
        const auto ro = law.rope(t);
        const auto tr = law.trolley(t);
        dydt[0] = y[1];
        dydt[1] =
            -(2.0 * ro.ldot * y[1] + g * std::sin(y[0]) + tr.xddot * std::cos(y[0])) / ro.l;
    };
    const auto grid = uniform_grid(law.duration(), opts.integration.grid_points);
    const auto bps = law.breakpoints();
    const auto states = integrate_at_times(rhs, {theta0, thetadot0}, grid, opts.integration, bps);

    SimulationResult r;
    r.model = SimulationModel::exact;
    r.t = grid;
    r.m_load = opts.m_load;
    r.gravity = g;
    const size_t n = grid.size();
    r.theta.resize(n);
    r.thetadot.resize(n);
    r.q.resize(n);
    r.qdot.resize(n);
    r.energy.resize(n);
    for (size_t i = 0; i < n; ++i) {
        const double theta = states[i][0];
        const double thetadot = states[i][1];
        const auto ro = law.rope(grid[i]);
        r.theta[i] = theta;
        r.thetadot[i] = thetadot;
        r.q[i] = ro.l * std::sin(theta);
        r.qdot[i] = ro.ldot * std::sin(theta) + ro.l * thetadot * std::cos(theta);
        r.energy[i] = 0.5 * opts.m_load * ro.l * ro.l * thetadot * thetadot +
                      opts.m_load * g * ro.l * (1.0 - std::cos(theta));
        if (std::fabs(theta) > 0.5 * kPi) r.exceeded_half_pi = true;
    }
    r.l_final = law.rope(law.duration()).l;
    r.theta_max_final =
        frozen_max_angle(r.theta.back(), r.thetadot.back(), r.l_final, g, &r.over_the_top);
    finalize_energies(r);
    return r;
}

SimulationResult simulate_harmonic(const ControlLaw& law, double q0, double qdot0,
                                   const SimOptions& opts) {
    const double g = law.gravity();
    const OdeRhs rhs = [&](const OdeState& y, OdeState& dydt, double t) {
        dydt[0] = y[1];
        dydt[1] = -law.omega2(t) * y[0] - law.trolley(t).xddot;
    };
    const auto grid = uniform_grid(law.duration(), opts.integration.grid_points);
    const auto bps = law.breakpoints();
    const auto states = integrate_at_times(rhs, {q0, qdot0}, grid, opts.integration, bps);

    SimulationResult r;
    r.model = SimulationModel::harmonic;
    r.t = grid;
    r.m_load = opts.m_load;
    r.gravity = g;
    const size_t n = grid.size();
    r.theta.resize(n);
    r.thetadot.resize(n);
    r.q.resize(n);
    r.qdot.resize(n);
    r.energy.resize(n);
    for (size_t i = 0; i < n; ++i) {
        const double q = states[i][0];
        const double qdot = states[i][1];
        const auto ro = law.rope(grid[i]);
        r.q[i] = q;
        r.qdot[i] = qdot;
        const double ratio = std::min(std::max(q / ro.l, -1.0), 1.0);
        const double theta = std::asin(ratio);
        r.theta[i] = theta;
        const double cos_theta = std::cos(theta);
        r.thetadot[i] = cos_theta > 1e-12
                            ? (qdot - ro.ldot * std::sin(theta)) / (ro.l * cos_theta)
                            : 0.0;
        r.energy[i] =
            0.5 * opts.m_load * qdot * qdot + 0.5 * opts.m_load * law.omega2(grid[i]) * q * q;
        if (std::fabs(theta) > 0.5 * kPi) r.exceeded_half_pi = true;
    }
    r.l_final = law.rope(law.duration()).l;
    r.theta_max_final =
        frozen_max_angle(r.theta.back(), r.thetadot.back(), r.l_final, g, &r.over_the_top);
    finalize_energies(r);
    return r;
}

double final_max_angle(const SimulationResult& result, double l_final) {
    if (!(l_final > 0.0)) throw InvalidInput("final rope length must be positive");
    const double theta = result.theta.back();
    const double thetadot = result.thetadot.back();
    const double m = result.m_load;
    const double g = result.gravity;
    // Pendulum energy with zero potential at theta = pi/2.
    const double tilde_E =
        0.5 * m * l_final * l_final * thetadot * thetadot - m * g * l_final * std::cos(theta);
    if (tilde_E >= 0.0)
        throw OverTheTop("final pendulum energy too high for a librating swing");
    return std::acos(std::min(-tilde_E / (m * g * l_final), 1.0));
}

PowerSeries actuating_force_and_power(const ControlLaw& law, const SimulationResult& exact_result,
                                      double M_trolley, double friction) {
    if (M_trolley < 0.0 || friction < 0.0)
        throw InvalidInput("trolley mass and friction must be non-negative");
    const double m = exact_result.m_load;
    const double g = exact_result.gravity;
    PowerSeries out;
    const size_t n = exact_result.t.size();
    out.t = exact_result.t;
    out.force.resize(n);
    out.power.resize(n);
    out.power_small.resize(n);
    for (size_t i = 0; i < n; ++i) {
        const double t = exact_result.t[i];
        const auto ro = law.rope(t);
        const auto tr = law.trolley(t);
        const double theta = exact_result.theta[i];
        const double thetadot = exact_result.thetadot[i];
        const double sin_t = std::sin(theta), cos_t = std::cos(theta);
        const double thetaddot =
            -(2.0 * ro.ldot * thetadot + g * sin_t + tr.xddot * cos_t) / ro.l;
        const double force = M_trolley * tr.xddot +
                             m * (tr.xddot + ro.l * thetaddot * cos_t -
                                  ro.l * thetadot * thetadot * sin_t) +
                             friction * tr.xdot;
        out.force[i] = force;
        out.power[i] = force * tr.xdot;
        out.power_small[i] =
            (M_trolley * tr.xddot - m * exact_result.q[i] * law.omega2(t) + friction * tr.xdot) *
            tr.xdot;
    }
    return out;
}

double mechanical_energy(const ControlLaw& law, const SimulationResult& exact_result, size_t i,
                         double M_trolley) {
    const double t = exact_result.t[i];
    const auto ro = law.rope(t);
    const auto tr = law.trolley(t);
    const double m = exact_result.m_load;
    const double theta = exact_result.theta[i];
    const double thetadot = exact_result.thetadot[i];
    const double kinetic =
        0.5 * M_trolley * tr.xdot * tr.xdot +
        0.5 * m *
            (tr.xdot * tr.xdot + ro.ldot * ro.ldot + ro.l * ro.l * thetadot * thetadot +
             2.0 * tr.xdot * ro.ldot * std::sin(theta) +
             2.0 * tr.xdot * ro.l * thetadot * std::cos(theta));
    const double potential = -m * exact_result.gravity * ro.l * std::cos(theta);
    return kinetic + potential;
}

ThreeStepLaw::ThreeStepLaw(const ThreeStepParams& params, double l, double g)
    : params_(params), l_(l), g_(g) {
    if (!(params.a_max >= 0.0) || !(params.T > 0.0) || params.t_c < 0.0)
        throw InvalidInput("three-step parameters out of range");
    if (!(l > 0.0) || !(g > 0.0)) throw InvalidInput("length and gravity must be positive");
}

TrolleyState ThreeStepLaw::trolley(double t) const {
    const double a = params_.a_max, T = params_.T, tc = params_.t_c;
    const double tf = params_.duration();
    t = std::min(std::max(t, 0.0), tf);
    if (t <= T) return {0.5 * a * t * t, a * t, a};
    const double x1 = 0.5 * a * T * T, v1 = a * T;
    if (t <= T + tc) {
        const double u = t - T;
        return {x1 + v1 * u, v1, 0.0};
    }
    const double u = t - T - tc;
    const double x2 = x1 + v1 * tc;
    return {x2 + v1 * u - 0.5 * a * u * u, v1 - a * u, -a};
}

std::vector<double> ThreeStepLaw::breakpoints() const {
    return {params_.T, params_.T + params_.t_c};
}

ControlTrajectory three_step_trajectory(const ThreeStepParams& params, double l, double g,
                                        int grid_points) {
    const ThreeStepLaw law(params, l, g);
    return sample_law(law, grid_points);
}

}  // namespace sway
