#pragma once

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "sway/control_law.hpp"
#include "sway/ode.hpp"
#include "sway/profiles.hpp"
#include "sway/scenario.hpp"

namespace sway {

/// Squared swing frequency derived from a scaling profile b(t):
/// omega^2(t) = omega0^2 / b^4 - bddot / b. Construction rejects profiles
/// that touch zero on the sampled interval.
class FrequencyLaw {
public:
    FrequencyLaw(PolynomialProfile b, double omega0);

    double operator()(double t) const;
    double omega0() const { return omega0_; }
    double duration() const { return b_.duration(); }
    const PolynomialProfile& scaling() const { return b_; }

private:
    PolynomialProfile b_;
    double omega0_;
};

FrequencyLaw frequency_from_scaling(const PolynomialProfile& b, double omega0);

struct RopeSolution {
    std::vector<double> t, l, ldot, lddot;
};

/// Solve lddot = g - omega^2(t) l from (l0, 0) on a dense grid. Throws
/// InfeasibleHoist if the rope length reaches zero on route.
RopeSolution integrate_rope_length(const std::function<double(double)>& omega2, double l0,
                                   double tf, double g, const IntegrationOptions& opts = {});

/// Outcome of a parameter solve: residuals of the end conditions and whether
/// the tolerance was met.
struct DesignReport {
    bool converged = true;
    double rope_length_residual = 0.0;      // l(tf) - lf, m
    double rope_velocity_residual = 0.0;    // ldot(tf), m/s
    double trolley_position_residual = 0.0; // x(tf) - d, m
    double trolley_velocity_residual = 0.0; // xdot(tf), m/s
    int iterations = 0;
    double seed_a6 = 0.0;
    double seed_a7 = 0.0;
};

struct DesignOptions {
    IntegrationOptions integration{};
    double shoot_rel_tol = 1e-9;   // on |l(tf)-lf| relative to max(l0,lf)
    double shoot_abs_vel_tol = 1e-9;  // on |ldot(tf)|, m/s
    int max_iterations = 100;
    double seed_a6 = 0.0;
    double seed_a7 = 0.0;
};

struct HoistSolve {
    double a6 = 0.0;
    double a7 = 0.0;
    DesignReport report;
};

/// Fix the free scaling coefficients so the rope ODE lands on (lf, 0) at tf.
/// Damped Newton on the two end residuals, seeded per options; the first
/// converged root is accepted. Throws NonConvergence past the iteration
/// budget.
HoistSolve solve_hoist_parameters(const ScenarioSpec& spec, const DesignOptions& opts = {});

struct TrolleySolve {
    std::vector<double> t, x, xdot, xddot;
    double b6 = 0.0;
    double b7 = 0.0;
    DesignReport report;
};

/// Fix (b6, b7) of the transport profile so the trolley reaches (d, rest) at
/// tf. The end state is affine in (b6, b7), so three response integrations
/// and one 2x2 solve do it; no iteration.
TrolleySolve design_trolley(std::span<const double> extras,
                            const std::function<double(double)>& omega2,
                            const ScenarioSpec& spec, const DesignOptions& opts = {});

/// A fully designed protocol: analytic profiles, the derived law, a dense
/// sample of it, and the solve diagnostics.
struct DesignedProtocol {
    std::shared_ptr<const ControlLaw> law;
    ControlTrajectory trajectory;
    DesignParameters params;
    DesignReport report;
    PolynomialProfile scaling;    // b(t)
    PolynomialProfile transport;  // alpha(t)
};

/// Simultaneous hoist/lower and transport (design steps i-iv composed).
DesignedProtocol design_dual_protocol(const ScenarioSpec& spec, const DesignOptions& opts = {});

/// Dual protocol with a fixed robustness extension of the transport ansatz.
DesignedProtocol design_dual_protocol(const ScenarioSpec& spec, std::span<const double> extras,
                                      const DesignOptions& opts = {});

enum class SequentialOrder { transport_first, hoist_first };

/// One operation at a time: a pure transport at constant rope length spliced
/// with a pure hoist/lower. Junction values and derivatives match exactly.
DesignedProtocol design_sequential_protocol(const ScenarioSpec& spec, SequentialOrder order,
                                            double t_transport, double t_hoist,
                                            const DesignOptions& opts = {});

/// Control law of a designed (smooth) protocol. The scaling and transport
/// profiles are evaluated analytically; rope and trolley series come from the
/// design integrations, interpolated to machine accuracy between nodes.
class DesignedControlLaw final : public ControlLaw {
public:
    DesignedControlLaw(PolynomialProfile scaling, PolynomialProfile transport,
                       RopeSolution rope, TrolleySolve trolley, double g);

    double duration() const override;
    double gravity() const override { return g_; }
    RopeState rope(double t) const override;
    TrolleyState trolley(double t) const override;
    double omega2(double t) const override;

    const PolynomialProfile& scaling_profile() const { return scaling_; }
    const PolynomialProfile& transport_profile() const { return transport_; }
    double omega0() const { return omega0_; }

private:
    PolynomialProfile scaling_;
    PolynomialProfile transport_;
    std::shared_ptr<const SampledControlLaw> interp_;  // rope/trolley node data
    double g_;
    double omega0_;
};

}  // namespace sway
