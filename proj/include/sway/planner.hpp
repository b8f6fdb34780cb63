#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "sway/control_law.hpp"
#include "sway/dynamics.hpp"
#include "sway/inverse_design.hpp"
#include "sway/scenario.hpp"

namespace sway {

/// Identifiers follow the report convention: (1) swing angle, (2) rope
/// length, (3) trolley position.
enum class ConstraintId {
    design_failure = 0,
    swing_angle = 1,
    rope_length = 2,
    trolley_position = 3,
    trolley_velocity = 4,
    trolley_acceleration = 5,
};

const char* to_string(ConstraintId id);

struct ConstraintSet {
    double theta_bound = deg_to_rad(10.0);  // |theta| <= bound, rad
    double x_min = 0.0, x_max = 0.0;        // m
    double l_min = 0.0, l_max = 0.0;        // m
    std::optional<double> v_ub;             // |xdot| bound, m/s
    std::optional<double> a_ub;             // |xddot| bound, m/s^2

    /// Default geometry: x in [0, d], l in [0, max(l0, lf)].
    static ConstraintSet defaults_for(const ScenarioSpec& spec);
    void validate() const;
};

struct ConstraintEntry {
    ConstraintId id;
    double worst_margin;           // min over time of bound minus excursion; < 0 violated
    double normalized_margin;      // worst_margin over the bound scale; unit-free ranking
    double worst_time;
    double first_violation_time;   // NaN when satisfied
    bool violated;
};

struct ConstraintReport {
    std::vector<ConstraintEntry> entries;
    bool feasible() const;
    /// Most deeply violated entry, margins normalized by the bound scale.
    const ConstraintEntry* worst_violated() const;
};

/// Evaluate every bound on the dense grid with local parabolic refinement
/// around the extrema.
ConstraintReport check_constraints(const ControlTrajectory& traj, const SimulationResult& sim,
                                   const ConstraintSet& cs);

struct MinTimeOptions {
    double resolution = 0.01;       // s, matches the two-decimal reporting
    double bracket_ceiling = 300.0; // s
    bool use_exact_dynamics = true;
    DesignOptions design{};
    SimOptions sim{};
};

struct MinTimeResult {
    double t_min = 0.0;
    ConstraintId active = ConstraintId::design_failure;
    ConstraintReport at_tmin;        // feasible margins at t_min
    double probe_time = 0.0;         // t_min - resolution
    ConstraintReport at_probe;       // the infeasible certificate
    bool probe_design_failed = false;
    std::vector<std::pair<double, bool>> monotonic_probes;  // (t, feasible)
    bool monotonic_ok = true;
    int designs_evaluated = 0;
};

/// Smallest feasible duration for the dual protocol, by bisection on the
/// resolution grid between an infeasible and a feasible bracket. Throws
/// InfeasibleHoist-style NonConvergence when no feasible duration exists
/// below the ceiling.
MinTimeResult min_time_dual(const ScenarioSpec& spec, const ConstraintSet& cs,
                            const MinTimeOptions& opts = {});

/// Pure transport of d at fixed rope length l.
MinTimeResult min_time_transport(double d, double l, const ScenarioSpec& base,
                                 const ConstraintSet& cs, const MinTimeOptions& opts = {});

/// Pure hoist/lower between the scenario lengths (d = 0).
MinTimeResult min_time_hoist(const ScenarioSpec& base, const ConstraintSet& cs,
                             const MinTimeOptions& opts = {});

/// Segment minima and the two order-dependent totals of the sequential
/// strategy. Transport minima can differ between the two rope lengths when a
/// geometric bound binds asymmetrically.
struct SequentialMinTime {
    MinTimeResult transport_at_l0;
    MinTimeResult transport_at_lf;
    MinTimeResult hoist;
    double total_transport_first = 0.0;  // transport at l0, then hoist
    double total_hoist_first = 0.0;      // hoist, then transport at lf
};

SequentialMinTime min_time_sequential(const ScenarioSpec& spec, const ConstraintSet& cs,
                                      const MinTimeOptions& opts = {});

/// Constant-frequency transports share the same swing-angle history at any
/// rope length; this verifies the trace identity and reports whether a
/// geometric bound breaks the shared minimal time.
struct TransportInvarianceReport {
    double max_rel_theta_diff = 0.0;  // pointwise harmonic difference at tf
    double t_min_a = 0.0, t_min_b = 0.0;
    ConstraintId active_a = ConstraintId::design_failure;
    ConstraintId active_b = ConstraintId::design_failure;
    bool symmetry_broken = false;
};

TransportInvarianceReport transport_length_invariance_check(double d, double tf, double l_a,
                                                            double l_b, const ScenarioSpec& base,
                                                            const ConstraintSet& cs,
                                                            const MinTimeOptions& opts = {});

struct RobustOptions {
    int max_iterations = 800;
    double initial_step = 0.0;  // 0: scaled from the baseline b6
    double f_tol = 1e-9;        // J, absolute simplex spread
    int restarts = 1;
    DesignOptions design{};
    SimOptions sim{};
};

struct RobustResult {
    PolynomialProfile transport;
    std::vector<double> extras;
    double b6 = 0.0, b7 = 0.0;
    double objective_baseline = 0.0;  // J, extras all zero
    double objective = 0.0;           // J, at the optimum
    int evaluations = 0;
    bool converged = true;            // false when the simplex stagnated
};

/// Flatten the final excitation over a grid of initial angles by tuning the
/// extra transport-profile parameters with a derivative-free simplex search.
/// The objective is the summed |final minus adiabatic| pendulum energy under
/// the exact dynamics; end conditions hold by construction for every trial.
RobustResult optimize_robust_transport(const ScenarioSpec& spec,
                                       std::span<const double> theta0_grid, int n_extra,
                                       const RobustOptions& opts = {});

}  // namespace sway
