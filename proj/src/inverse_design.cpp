#include "sway/inverse_design.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "sway/errors.hpp"
#include "sway/log.hpp"

namespace sway {

FrequencyLaw::FrequencyLaw(PolynomialProfile b, double omega0)
    : b_(std::move(b)), omega0_(omega0) {
    if (!(omega0 > 0.0)) throw InvalidInput("omega0 must be positive");
    // The frequency map is undefined wherever b touches zero.
    const int probes = 512;
    for (int i = 0; i <= probes; ++i) {
        const double t = b_.duration() * static_cast<double>(i) / probes;
        if (b_.value(t) <= 0.0)
            throw DegenerateScaling("scaling function is non-positive inside [0, tf]");
    }
}

double FrequencyLaw::operator()(double t) const {
    const double b = b_.value(t);
    if (b <= 0.0) throw DegenerateScaling("scaling function is non-positive");
    const double bddot = b_.second_derivative(t);
    const double b2 = b * b;
    return omega0_ * omega0_ / (b2 * b2) - bddot / b;
}

FrequencyLaw frequency_from_scaling(const PolynomialProfile& b, double omega0) {
    return FrequencyLaw(b, omega0);
}

RopeSolution integrate_rope_length(const std::function<double(double)>& omega2, double l0,
                                   double tf, double g, const IntegrationOptions& opts) {
    if (!(l0 > 0.0) || !(tf > 0.0) || !(g > 0.0))
        throw InvalidInput("rope integration needs positive l0, tf, g");
    const OdeRhs rhs = [&](const OdeState& y, OdeState& dydt, double t) {
        if (y[0] <= 0.0) throw InfeasibleHoist("rope length reached zero on route");
        dydt[0] = y[1];
        dydt[1] = g - omega2(t) * y[0];
    };
    const auto grid = uniform_grid(tf, opts.grid_points);
    const auto states = integrate_at_times(rhs, {l0, 0.0}, grid, opts);
    RopeSolution sol;
    sol.t = grid;
    sol.l.resize(grid.size());
    sol.ldot.resize(grid.size());
    sol.lddot.resize(grid.size());
    for (size_t i = 0; i < grid.size(); ++i) {
        sol.l[i] = states[i][0];
        sol.ldot[i] = states[i][1];
        if (sol.l[i] <= 0.0) throw InfeasibleHoist("rope length reached zero on route");
        sol.lddot[i] = g - omega2(grid[i]) * sol.l[i];
    }
    return sol;
}

namespace {

// End state (l, ldot) of the rope ODE for given free scaling coefficients.
std::pair<double, double> rope_end_state(const ScenarioSpec& spec, double a6, double a7,
                                         const IntegrationOptions& opts) {
    const auto b = build_scaling_profile(spec.l0, spec.lf, a6, a7, spec.tf);
    const FrequencyLaw omega2(b, spec.omega0());
    const OdeRhs rhs = [&](const OdeState& y, OdeState& dydt, double t) {
        if (y[0] <= 0.0) throw InfeasibleHoist("rope length reached zero on route");
        dydt[0] = y[1];
        dydt[1] = spec.g - omega2(t) * y[0];
    };
    const auto end = integrate_endpoint(rhs, {spec.l0, 0.0}, 0.0, spec.tf, opts);
    return {end[0], end[1]};
}

}  // namespace

HoistSolve solve_hoist_parameters(const ScenarioSpec& spec, const DesignOptions& opts) {
    spec.validate();
    const double scale = std::max(spec.l0, spec.lf);
    const double tol_l = opts.shoot_rel_tol * scale;
    const double tol_v = opts.shoot_abs_vel_tol;

    auto residual = [&](double a6, double a7) -> std::pair<double, double> {
        const auto end = rope_end_state(spec, a6, a7, opts.integration);
        return {end.first - spec.lf, end.second};
    };
    auto norm2 = [](const std::pair<double, double>& r) {
        return r.first * r.first + r.second * r.second;
    };

    double a6 = opts.seed_a6, a7 = opts.seed_a7;
    auto r = residual(a6, a7);
    int iterations = 0;
    int stalled = 0;
    while (!(std::fabs(r.first) < tol_l && std::fabs(r.second) < tol_v)) {
        if (iterations >= opts.max_iterations || stalled >= 3)
            throw NonConvergence("hoist parameter shoot did not converge", r.first, r.second);
        ++iterations;

        const double h6 = 1e-6 * std::max(1.0, std::fabs(a6));
        const double h7 = 1e-6 * std::max(1.0, std::fabs(a7));
        const auto r6 = residual(a6 + h6, a7);
        const auto r7 = residual(a6, a7 + h7);
        const double j11 = (r6.first - r.first) / h6, j12 = (r7.first - r.first) / h7;
        const double j21 = (r6.second - r.second) / h6, j22 = (r7.second - r.second) / h7;
        const double det = j11 * j22 - j12 * j21;
        if (!(std::fabs(det) > 0.0))
            throw NonConvergence("singular shoot Jacobian", r.first, r.second);
        const double da6 = (-r.first * j22 + r.second * j12) / det;
        const double da7 = (-j11 * r.second + j21 * r.first) / det;

        // Backtrack until the residual norm decreases.
        double lambda = 1.0;
        bool accepted = false;
        const double base = norm2(r);
        while (lambda >= 1.0 / 1024.0) {
            try {
                const auto trial = residual(a6 + lambda * da6, a7 + lambda * da7);
                if (norm2(trial) < base) {
                    a6 += lambda * da6;
                    a7 += lambda * da7;
                    r = trial;
                    accepted = true;
                    break;
                }
            } catch (const InfeasibleHoist&) {
            } catch (const DegenerateScaling&) {
            }
            lambda *= 0.5;
        }
        stalled = accepted ? 0 : stalled + 1;
        if (!accepted) {
            // Nudge along the Newton direction anyway; three stalls abort.
            try {
                const auto trial = residual(a6 + da6 / 1024.0, a7 + da7 / 1024.0);
                a6 += da6 / 1024.0;
                a7 += da7 / 1024.0;
                r = trial;
            } catch (const std::runtime_error&) {
            }
        }
    }

    HoistSolve out;
    out.a6 = a6;
    out.a7 = a7;
    out.report.converged = true;
    out.report.rope_length_residual = r.first;
    out.report.rope_velocity_residual = r.second;
    out.report.iterations = iterations;
    out.report.seed_a6 = opts.seed_a6;
    out.report.seed_a7 = opts.seed_a7;
    SWAY_LOG_DEBUG("hoist shoot converged in %d iterations: a6=%.12g a7=%.12g", iterations, a6,
                   a7);
    return out;
}

namespace {

// End state (x, xdot) of the trolley response to a given transport profile.
std::pair<double, double> trolley_end_state(const PolynomialProfile& alpha,
                                            const std::function<double(double)>& omega2,
                                            double tf, const IntegrationOptions& opts) {
    const OdeRhs rhs = [&](const OdeState& y, OdeState& dydt, double t) {
        dydt[0] = y[1];
        dydt[1] = -(alpha.evaluate(t, 2) + omega2(t) * alpha.value(t));
    };
    const auto end = integrate_endpoint(rhs, {0.0, 0.0}, 0.0, tf, opts);
    return {end[0], end[1]};
}

}  // namespace

TrolleySolve design_trolley(std::span<const double> extras,
                            const std::function<double(double)>& omega2,
                            const ScenarioSpec& spec, const DesignOptions& opts) {
    spec.validate();
    const double tf = spec.tf;
    const std::vector<double> no_extras(extras.size(), 0.0);

    // Affine map (b6, b7) -> (x(tf), xdot(tf)): offset plus two basis columns.
    const auto base6 = build_extended_transport_profile(1.0, 0.0, no_extras, tf);
    const auto base7 = build_extended_transport_profile(0.0, 1.0, no_extras, tf);
    const auto offset_profile = build_extended_transport_profile(0.0, 0.0, extras, tf);

    const auto r0 = trolley_end_state(offset_profile, omega2, tf, opts.integration);
    const auto r6 = trolley_end_state(base6, omega2, tf, opts.integration);
    const auto r7 = trolley_end_state(base7, omega2, tf, opts.integration);

    const double m11 = r6.first - r0.first, m12 = r7.first - r0.first;
    const double m21 = r6.second - r0.second, m22 = r7.second - r0.second;
    const double det = m11 * m22 - m12 * m21;
    const double col_scale = std::sqrt((m11 * m11 + m21 * m21) * (m12 * m12 + m22 * m22));
    if (!(std::fabs(det) > 1e-12 * std::max(col_scale, 1e-300)))
        throw DegenerateDesign("transport parameter system is singular");

    const double rhs1 = spec.d - r0.first;
    const double rhs2 = -r0.second;
    const double b6 = (rhs1 * m22 - rhs2 * m12) / det;
    const double b7 = (m11 * rhs2 - m21 * rhs1) / det;

    const auto alpha = build_extended_transport_profile(b6, b7, extras, tf);
    const OdeRhs rhs = [&](const OdeState& y, OdeState& dydt, double t) {
        dydt[0] = y[1];
        dydt[1] = -(alpha.evaluate(t, 2) + omega2(t) * alpha.value(t));
    };
    const auto grid = uniform_grid(tf, opts.integration.grid_points);
    const auto states = integrate_at_times(rhs, {0.0, 0.0}, grid, opts.integration);

    TrolleySolve out;
    out.t = grid;
    out.x.resize(grid.size());
    out.xdot.resize(grid.size());
    out.xddot.resize(grid.size());
    for (size_t i = 0; i < grid.size(); ++i) {
        out.x[i] = states[i][0];
        out.xdot[i] = states[i][1];
        out.xddot[i] = -(alpha.evaluate(grid[i], 2) + omega2(grid[i]) * alpha.value(grid[i]));
    }
    out.b6 = b6;
    out.b7 = b7;
    out.report.trolley_position_residual = out.x.back() - spec.d;
    out.report.trolley_velocity_residual = out.xdot.back();
    out.report.converged = true;
    return out;
}

DesignedControlLaw::DesignedControlLaw(PolynomialProfile scaling, PolynomialProfile transport,
                                       RopeSolution rope, TrolleySolve trolley, double g)
    : scaling_(std::move(scaling)), transport_(std::move(transport)), g_(g) {
    ControlTrajectory nodes;
    nodes.t = rope.t;
    nodes.l = std::move(rope.l);
    nodes.ldot = std::move(rope.ldot);
    nodes.lddot = std::move(rope.lddot);
    nodes.x = std::move(trolley.x);
    nodes.xdot = std::move(trolley.xdot);
    nodes.xddot = std::move(trolley.xddot);
    nodes.gravity = g;
    nodes.omega2.resize(nodes.t.size());
    for (size_t i = 0; i < nodes.t.size(); ++i)
        nodes.omega2[i] = (g - nodes.lddot[i]) / nodes.l[i];
    omega0_ = std::sqrt(g / nodes.l.front());
    interp_ = std::make_shared<const SampledControlLaw>(std::move(nodes));
}

double DesignedControlLaw::duration() const { return scaling_.duration(); }

double DesignedControlLaw::omega2(double t) const {
    const double b = scaling_.value(t);
    return omega0_ * omega0_ / (b * b * b * b) - scaling_.second_derivative(t) / b;
}

RopeState DesignedControlLaw::rope(double t) const {
    auto r = interp_->rope(t);
    r.lddot = g_ - omega2(t) * r.l;  // keep the kinematic relation exact
    return r;
}

TrolleyState DesignedControlLaw::trolley(double t) const {
    auto c = interp_->trolley(t);
    c.xddot = -(transport_.evaluate(t, 2) + omega2(t) * transport_.value(t));
    return c;
}

namespace {

ControlTrajectory assemble_trajectory(const ControlLaw& law, const RopeSolution& rope,
                                      const TrolleySolve& trolley,
                                      const DesignParameters& params, double g) {
    ControlTrajectory traj;
    traj.t = rope.t;
    traj.l = rope.l;
    traj.ldot = rope.ldot;
    traj.lddot = rope.lddot;
    traj.x = trolley.x;
    traj.xdot = trolley.xdot;
    traj.xddot = trolley.xddot;
    traj.omega2.resize(traj.t.size());
    for (size_t i = 0; i < traj.t.size(); ++i) traj.omega2[i] = law.omega2(traj.t[i]);
    traj.params = params;
    traj.gravity = g;
    traj.validate();
    return traj;
}

}  // namespace

DesignedProtocol design_dual_protocol(const ScenarioSpec& spec, const DesignOptions& opts) {
    return design_dual_protocol(spec, std::span<const double>{}, opts);
}

DesignedProtocol design_dual_protocol(const ScenarioSpec& spec, std::span<const double> extras,
                                      const DesignOptions& opts) {
    spec.validate();
    const auto hoist = solve_hoist_parameters(spec, opts);
    const auto b = build_scaling_profile(spec.l0, spec.lf, hoist.a6, hoist.a7, spec.tf);
    const FrequencyLaw omega2(b, spec.omega0());
    auto rope = integrate_rope_length(omega2, spec.l0, spec.tf, spec.g, opts.integration);
    auto trolley = design_trolley(extras, omega2, spec, opts);
    const auto alpha = build_extended_transport_profile(trolley.b6, trolley.b7, extras, spec.tf);

    DesignParameters params;
    params.a6 = hoist.a6;
    params.a7 = hoist.a7;
    params.b6 = trolley.b6;
    params.b7 = trolley.b7;
    params.extras.assign(extras.begin(), extras.end());

    DesignReport report = hoist.report;
    report.trolley_position_residual = trolley.report.trolley_position_residual;
    report.trolley_velocity_residual = trolley.report.trolley_velocity_residual;

    auto law = std::make_shared<DesignedControlLaw>(b, alpha, rope, trolley, spec.g);
    auto trajectory = assemble_trajectory(*law, rope, trolley, params, spec.g);
    return DesignedProtocol{std::move(law), std::move(trajectory), std::move(params), report, b,
                            alpha};
}

namespace {

/// Two designed segments glued back to back; the trolley of the second
/// segment is shifted by whatever the first one accumulated.
class SplicedControlLaw final : public ControlLaw {
public:
    SplicedControlLaw(std::shared_ptr<const ControlLaw> first,
                      std::shared_ptr<const ControlLaw> second, double x_offset_second)
        : first_(std::move(first)), second_(std::move(second)), x_offset_(x_offset_second) {
        t_junction_ = first_->duration();
        duration_ = t_junction_ + second_->duration();
        g_ = first_->gravity();
    }

    double duration() const override { return duration_; }
    double gravity() const override { return g_; }

    RopeState rope(double t) const override {
        if (t <= t_junction_) return first_->rope(t);
        return second_->rope(t - t_junction_);
    }

    TrolleyState trolley(double t) const override {
        if (t <= t_junction_) return first_->trolley(t);
        auto c = second_->trolley(t - t_junction_);
        c.x += x_offset_;
        return c;
    }

    double omega2(double t) const override {
        if (t <= t_junction_) return first_->omega2(t);
        return second_->omega2(t - t_junction_);
    }

    std::vector<double> breakpoints() const override { return {t_junction_}; }

private:
    std::shared_ptr<const ControlLaw> first_;
    std::shared_ptr<const ControlLaw> second_;
    double x_offset_;
    double t_junction_ = 0.0;
    double duration_ = 0.0;
    double g_ = 9.81;
};

}  // namespace

DesignedProtocol design_sequential_protocol(const ScenarioSpec& spec, SequentialOrder order,
                                            double t_transport, double t_hoist,
                                            const DesignOptions& opts) {
    spec.validate();
    if (!(t_transport > 0.0) || !(t_hoist > 0.0))
        throw InvalidInput("sequential segments need positive durations");
    if (std::fabs(t_transport + t_hoist - spec.tf) > 1e-9 * std::max(spec.tf, 1.0))
        throw InvalidInput("segment durations must add up to tf");

    const double l_transport = order == SequentialOrder::transport_first ? spec.l0 : spec.lf;
    ScenarioSpec transport_spec = spec;
    transport_spec.l0 = transport_spec.lf = l_transport;
    transport_spec.tf = t_transport;

    ScenarioSpec hoist_spec = spec;
    hoist_spec.d = 0.0;
    hoist_spec.tf = t_hoist;

    auto transport = design_dual_protocol(transport_spec, opts);
    auto hoist = design_dual_protocol(hoist_spec, opts);

    std::shared_ptr<const ControlLaw> law;
    if (order == SequentialOrder::transport_first)
        law = std::make_shared<SplicedControlLaw>(transport.law, hoist.law, spec.d);
    else
        law = std::make_shared<SplicedControlLaw>(hoist.law, transport.law, 0.0);

    DesignParameters params;
    params.a6 = hoist.params.a6;
    params.a7 = hoist.params.a7;
    params.b6 = transport.params.b6;
    params.b7 = transport.params.b7;

    DesignReport report = hoist.report;
    report.trolley_position_residual = transport.report.trolley_position_residual;
    report.trolley_velocity_residual = transport.report.trolley_velocity_residual;
    report.iterations = hoist.report.iterations + transport.report.iterations;

    auto trajectory = sample_law(*law, opts.integration.grid_points, params);
    return DesignedProtocol{law, std::move(trajectory), std::move(params), report,
                            hoist.scaling, transport.transport};
}

}  // namespace sway
