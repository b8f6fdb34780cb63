#include "sway/planner.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>

#include "sway/adiabatic.hpp"
#include "sway/errors.hpp"
#include "sway/log.hpp"

namespace sway {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Largest series value, with a three-point parabolic refinement at interior
// local maxima so grid placement does not clip narrow peaks.
std::pair<double, double> refined_max(std::span<const double> t, std::span<const double> y) {
    size_t best = 0;
    for (size_t i = 1; i < y.size(); ++i)
        if (y[i] > y[best]) best = i;
    double value = y[best];
    double at = t[best];
    if (best > 0 && best + 1 < y.size()) {
        const double denom = y[best - 1] - 2.0 * y[best] + y[best + 1];
        if (denom < -1e-300) {
            const double delta = 0.5 * (y[best - 1] - y[best + 1]) / denom;
            if (std::fabs(delta) <= 1.0) {
                value = y[best] - 0.25 * (y[best - 1] - y[best + 1]) * delta;
                value = std::max(value, y[best]);
                at = t[best] + delta * (t[best] - t[best - 1]);
            }
        }
    }
    return {value, at};
}

double first_crossing(std::span<const double> t, std::span<const double> y, double bound,
                      bool above) {
    for (size_t i = 0; i < y.size(); ++i) {
        const bool hit = above ? y[i] > bound : y[i] < bound;
        if (hit) return t[i];
    }
    return kNaN;
}

// Two-sided bound check: worst margin over both edges.
ConstraintEntry bounded_entry(ConstraintId id, std::span<const double> t,
                              std::span<const double> y, double lo, double hi) {
    std::vector<double> neg(y.size());
    for (size_t i = 0; i < y.size(); ++i) neg[i] = -y[i];
    const auto top = refined_max(t, y);
    const auto bottom = refined_max(t, neg);
    const double margin_hi = hi - top.first;
    const double margin_lo = (-bottom.first) - lo;
    ConstraintEntry e;
    e.id = id;
    if (margin_hi <= margin_lo) {
        e.worst_margin = margin_hi;
        e.worst_time = top.second;
    } else {
        e.worst_margin = margin_lo;
        e.worst_time = bottom.second;
    }
    e.violated = e.worst_margin < -1e-9;
    e.first_violation_time = kNaN;
    if (e.violated) {
        const double t_hi = first_crossing(t, y, hi + 1e-9, true);
        const double t_lo = first_crossing(t, y, lo - 1e-9, false);
        e.first_violation_time = std::isnan(t_hi) ? t_lo : (std::isnan(t_lo) ? t_hi : std::min(t_hi, t_lo));
    }
    return e;
}

double bound_scale(const ConstraintEntry& e, const ConstraintSet& cs) {
    switch (e.id) {
        case ConstraintId::swing_angle: return std::max(cs.theta_bound, 1e-12);
        case ConstraintId::rope_length: return std::max(cs.l_max - cs.l_min, 1e-12);
        case ConstraintId::trolley_position: return std::max(cs.x_max - cs.x_min, 1.0);
        case ConstraintId::trolley_velocity: return std::max(cs.v_ub.value_or(1.0), 1e-12);
        case ConstraintId::trolley_acceleration: return std::max(cs.a_ub.value_or(1.0), 1e-12);
        default: return 1.0;
    }
}

}  // namespace

const char* to_string(ConstraintId id) {
    switch (id) {
        case ConstraintId::swing_angle: return "theta";
        case ConstraintId::rope_length: return "rope";
        case ConstraintId::trolley_position: return "trolley";
        case ConstraintId::trolley_velocity: return "trolley_velocity";
        case ConstraintId::trolley_acceleration: return "trolley_acceleration";
        default: return "design";
    }
}

ConstraintSet ConstraintSet::defaults_for(const ScenarioSpec& spec) {
    ConstraintSet cs;
    cs.x_min = 0.0;
    cs.x_max = spec.d;
    cs.l_min = 0.0;
    cs.l_max = std::max(spec.l0, spec.lf);
    return cs;
}

void ConstraintSet::validate() const {
    if (!(theta_bound > 0.0)) throw InvalidInput("swing bound must be positive");
    if (!(x_max >= x_min)) throw InvalidInput("trolley bounds out of order");
    if (!(l_max > l_min)) throw InvalidInput("rope bounds out of order");
    if (v_ub && !(*v_ub > 0.0)) throw InvalidInput("velocity bound must be positive");
    if (a_ub && !(*a_ub > 0.0)) throw InvalidInput("acceleration bound must be positive");
}

bool ConstraintReport::feasible() const {
    for (const auto& e : entries)
        if (e.violated) return false;
    return true;
}

const ConstraintEntry* ConstraintReport::worst_violated() const {
    const ConstraintEntry* worst = nullptr;
    for (const auto& e : entries) {
        if (!e.violated) continue;
        if (worst == nullptr || e.normalized_margin < worst->normalized_margin) worst = &e;
    }
    return worst;
}

ConstraintReport check_constraints(const ControlTrajectory& traj, const SimulationResult& sim,
                                   const ConstraintSet& cs) {
    cs.validate();
    ConstraintReport report;
    report.entries.push_back(bounded_entry(ConstraintId::swing_angle, sim.t, sim.theta,
                                           -cs.theta_bound, cs.theta_bound));
    report.entries.push_back(
        bounded_entry(ConstraintId::rope_length, traj.t, traj.l, cs.l_min, cs.l_max));
    report.entries.push_back(
        bounded_entry(ConstraintId::trolley_position, traj.t, traj.x, cs.x_min, cs.x_max));
    if (cs.v_ub)
        report.entries.push_back(
            bounded_entry(ConstraintId::trolley_velocity, traj.t, traj.xdot, -*cs.v_ub, *cs.v_ub));
    if (cs.a_ub)
        report.entries.push_back(bounded_entry(ConstraintId::trolley_acceleration, traj.t,
                                               traj.xddot, -*cs.a_ub, *cs.a_ub));
    for (auto& e : report.entries) e.normalized_margin = e.worst_margin / bound_scale(e, cs);
    return report;
}

namespace {

struct TrialOutcome {
    bool design_ok = false;
    bool feasible = false;
    ConstraintReport report;
};

TrialOutcome evaluate_trial(const ScenarioSpec& spec, const ConstraintSet& cs,
                            const MinTimeOptions& opts) {
    TrialOutcome out;
    DesignedProtocol protocol;
    try {
        protocol = design_dual_protocol(spec, opts.design);
    } catch (const NonConvergence&) {
        return out;
    } catch (const InfeasibleHoist&) {
        return out;
    } catch (const DegenerateScaling&) {
        return out;
    }
    out.design_ok = true;
    SimOptions sim_opts = opts.sim;
    const SimulationResult sim =
        opts.use_exact_dynamics ? simulate_exact(*protocol.law, 0.0, 0.0, sim_opts)
                                : simulate_harmonic(*protocol.law, 0.0, 0.0, sim_opts);
    out.report = check_constraints(protocol.trajectory, sim, cs);
    out.feasible = out.report.feasible();
    return out;
}

MinTimeResult bisect_min_time(const ScenarioSpec& spec, const ConstraintSet& cs,
                              const MinTimeOptions& opts) {
    cs.validate();
    const double res = opts.resolution;
    std::map<long, TrialOutcome> cache;
    int evaluated = 0;
    auto trial = [&](long n) -> const TrialOutcome& {
        auto it = cache.find(n);
        if (it == cache.end()) {
            ++evaluated;
            it = cache.emplace(n, evaluate_trial(spec.with_tf(n * res), cs, opts)).first;
        }
        return it->second;
    };

    long lo = 1;  // presumed infeasible floor at one resolution step
    if (trial(lo).feasible) {
        MinTimeResult r;
        r.t_min = lo * res;
        r.at_tmin = trial(lo).report;
        r.active = ConstraintId::design_failure;
        r.designs_evaluated = evaluated;
        return r;
    }
    long hi = std::max<long>(lo + 1, std::lround(std::max(spec.tf, 1.0) / res));
    while (!trial(hi).feasible) {
        lo = hi;
        hi *= 2;
        if (hi * res > opts.bracket_ceiling)
            throw NonConvergence("no feasible duration below the bracket ceiling",
                                 opts.bracket_ceiling, 0.0);
    }
    while (hi - lo > 1) {
        const long mid = lo + (hi - lo) / 2;
        if (trial(mid).feasible)
            hi = mid;
        else
            lo = mid;
    }

    MinTimeResult r;
    r.t_min = hi * res;
    r.at_tmin = trial(hi).report;
    r.probe_time = lo * res;
    const auto& probe = trial(lo);
    r.probe_design_failed = !probe.design_ok;
    r.at_probe = probe.report;
    if (probe.design_ok) {
        if (const auto* worst = probe.report.worst_violated()) r.active = worst->id;
    }
    for (double dt : {0.1, 0.5, 1.0}) {
        const long n = hi + std::lround(dt / res);
        const bool ok = trial(n).feasible;
        r.monotonic_probes.emplace_back(n * res, ok);
        if (!ok) r.monotonic_ok = false;
    }
    r.designs_evaluated = evaluated;
    SWAY_LOG_INFO("min time %.2f s after %d designs (active: %s)", r.t_min, evaluated,
                  to_string(r.active));
    return r;
}

}  // namespace

MinTimeResult min_time_dual(const ScenarioSpec& spec, const ConstraintSet& cs,
                            const MinTimeOptions& opts) {
    spec.validate();
    return bisect_min_time(spec, cs, opts);
}

MinTimeResult min_time_transport(double d, double l, const ScenarioSpec& base,
                                 const ConstraintSet& cs, const MinTimeOptions& opts) {
    ScenarioSpec spec = base;
    spec.l0 = spec.lf = l;
    spec.d = d;
    spec.validate();
    return bisect_min_time(spec, cs, opts);
}

MinTimeResult min_time_hoist(const ScenarioSpec& base, const ConstraintSet& cs,
                             const MinTimeOptions& opts) {
    ScenarioSpec spec = base;
    spec.d = 0.0;
    spec.validate();
    return bisect_min_time(spec, cs, opts);
}

SequentialMinTime min_time_sequential(const ScenarioSpec& spec, const ConstraintSet& cs,
                                      const MinTimeOptions& opts) {
    spec.validate();
    SequentialMinTime out;
    out.transport_at_l0 = min_time_transport(spec.d, spec.l0, spec, cs, opts);
    out.transport_at_lf = min_time_transport(spec.d, spec.lf, spec, cs, opts);
    out.hoist = min_time_hoist(spec, cs, opts);
    out.total_transport_first = out.transport_at_l0.t_min + out.hoist.t_min;
    out.total_hoist_first = out.hoist.t_min + out.transport_at_lf.t_min;
    return out;
}

TransportInvarianceReport transport_length_invariance_check(double d, double tf, double l_a,
                                                            double l_b, const ScenarioSpec& base,
                                                            const ConstraintSet& cs,
                                                            const MinTimeOptions& opts) {
    TransportInvarianceReport report;

    auto transport = [&](double l) {
        ScenarioSpec spec = base;
        spec.l0 = spec.lf = l;
        spec.d = d;
        spec.tf = tf;
        return design_dual_protocol(spec, opts.design);
    };
    const auto proto_a = transport(l_a);
    const auto proto_b = transport(l_b);
    const auto sim_a = simulate_harmonic(*proto_a.law, 0.0, 0.0, opts.sim);
    const auto sim_b = simulate_harmonic(*proto_b.law, 0.0, 0.0, opts.sim);
    double max_diff = 0.0, max_theta = 0.0;
    for (size_t i = 0; i < sim_a.t.size(); ++i) {
        max_diff = std::max(max_diff, std::fabs(sim_a.theta[i] - sim_b.theta[i]));
        max_theta = std::max(max_theta, std::fabs(sim_a.theta[i]));
    }
    report.max_rel_theta_diff = max_theta > 0.0 ? max_diff / max_theta : 0.0;

    const auto mt_a = min_time_transport(d, l_a, base, cs, opts);
    const auto mt_b = min_time_transport(d, l_b, base, cs, opts);
    report.t_min_a = mt_a.t_min;
    report.active_a = mt_a.active;
    report.t_min_b = mt_b.t_min;
    report.active_b = mt_b.active;
    // The lengths share a swing-bound minimum (up to planning resolution);
    // the symmetry breaks when a different, geometric constraint takes over
    // at one of them.
    report.symmetry_broken = mt_a.active != mt_b.active;
    return report;
}

namespace {

// Plain Nelder-Mead simplex; the objectives here are cheap and smooth enough
// that no gradient machinery is warranted.
struct SimplexResult {
    std::vector<double> x;
    double f = 0.0;
    int evaluations = 0;
    bool converged = false;
};

template <typename F>
SimplexResult nelder_mead(const F& f, std::vector<double> x0, double step, int max_iter,
                          double f_tol) {
    const size_t n = x0.size();
    std::vector<std::vector<double>> pts(n + 1, x0);
    std::vector<double> fv(n + 1);
    int evals = 0;
    for (size_t i = 1; i <= n; ++i) pts[i][i - 1] += step;
    for (size_t i = 0; i <= n; ++i) {
        fv[i] = f(pts[i]);
        ++evals;
    }

    auto order = [&]() {
        for (size_t i = 0; i <= n; ++i)
            for (size_t j = i + 1; j <= n; ++j)
                if (fv[j] < fv[i]) {
                    std::swap(fv[i], fv[j]);
                    std::swap(pts[i], pts[j]);
                }
    };

    bool converged = false;
    for (int it = 0; it < max_iter; ++it) {
        order();
        if (fv[n] - fv[0] < f_tol) {
            converged = true;
            break;
        }
        std::vector<double> centroid(n, 0.0);
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) centroid[j] += pts[i][j] / static_cast<double>(n);

        auto blend = [&](double coeff) {
            std::vector<double> p(n);
            for (size_t j = 0; j < n; ++j)
                p[j] = centroid[j] + coeff * (pts[n][j] - centroid[j]);
            return p;
        };

        const auto reflected = blend(-1.0);
        const double fr = f(reflected);
        ++evals;
        if (fr < fv[0]) {
            const auto expanded = blend(-2.0);
            const double fe = f(expanded);
            ++evals;
            if (fe < fr) {
                pts[n] = expanded;
                fv[n] = fe;
            } else {
                pts[n] = reflected;
                fv[n] = fr;
            }
        } else if (fr < fv[n - 1]) {
            pts[n] = reflected;
            fv[n] = fr;
        } else {
            const auto contracted = blend(fr < fv[n] ? -0.5 : 0.5);
            const double fc = f(contracted);
            ++evals;
            if (fc < std::min(fr, fv[n])) {
                pts[n] = contracted;
                fv[n] = fc;
            } else {
                for (size_t i = 1; i <= n; ++i) {
                    for (size_t j = 0; j < n; ++j)
                        pts[i][j] = pts[0][j] + 0.5 * (pts[i][j] - pts[0][j]);
                    fv[i] = f(pts[i]);
                    ++evals;
                }
            }
        }
    }
    order();
    return {pts[0], fv[0], evals, converged};
}

}  // namespace

RobustResult optimize_robust_transport(const ScenarioSpec& spec,
                                       std::span<const double> theta0_grid, int n_extra,
                                       const RobustOptions& opts) {
    spec.validate();
    if (theta0_grid.empty()) throw InvalidInput("need at least one grid angle");
    if (n_extra < 0) throw InvalidInput("number of extra parameters must be non-negative");

    const auto hoist = solve_hoist_parameters(spec, opts.design);
    const auto b = build_scaling_profile(spec.l0, spec.lf, hoist.a6, hoist.a7, spec.tf);
    const FrequencyLaw omega2(b, spec.omega0());
    const auto rope = integrate_rope_length(omega2, spec.l0, spec.tf, spec.g, opts.design.integration);

    // Rope interpolant shared by every trial; only the transport changes.
    ControlTrajectory rope_nodes;
    rope_nodes.t = rope.t;
    rope_nodes.l = rope.l;
    rope_nodes.ldot = rope.ldot;
    rope_nodes.lddot = rope.lddot;
    rope_nodes.x.assign(rope.t.size(), 0.0);
    rope_nodes.xdot.assign(rope.t.size(), 0.0);
    rope_nodes.xddot.assign(rope.t.size(), 0.0);
    rope_nodes.omega2.resize(rope.t.size());
    for (size_t i = 0; i < rope.t.size(); ++i)
        rope_nodes.omega2[i] = (spec.g - rope.lddot[i]) / rope.l[i];
    rope_nodes.gravity = spec.g;
    const SampledControlLaw rope_interp(rope_nodes);

    const std::function<double(double)> omega2_fn = [&](double t) { return omega2(t); };

    // Affine responses of (x(tf), xdot(tf)): two base columns plus one column
    // per extra monomial; trial solves then cost no integration at all.
    const double tf = spec.tf;
    const IntegrationOptions& integ = opts.design.integration;
    auto response = [&](const PolynomialProfile& alpha) {
        const OdeRhs rhs = [&](const OdeState& y, OdeState& dydt, double t) {
            dydt[0] = y[1];
            dydt[1] = -(alpha.evaluate(t, 2) + omega2(t) * alpha.value(t));
        };
        return integrate_endpoint(rhs, {0.0, 0.0}, 0.0, tf, integ);
    };
    const std::vector<double> zero_extras(static_cast<size_t>(n_extra), 0.0);
    const auto r6 = response(build_extended_transport_profile(1.0, 0.0, zero_extras, tf));
    const auto r7 = response(build_extended_transport_profile(0.0, 1.0, zero_extras, tf));
    std::vector<std::array<double, 2>> extra_cols;
    for (int k = 0; k < n_extra; ++k) {
        std::vector<double> e(static_cast<size_t>(n_extra), 0.0);
        e[static_cast<size_t>(k)] = 1.0;
        const auto rk = response(build_extended_transport_profile(0.0, 0.0, e, tf));
        extra_cols.push_back({rk[0], rk[1]});
    }
    const double det = r6[0] * r7[1] - r7[0] * r6[1];
    if (!(std::fabs(det) > 0.0)) throw DegenerateDesign("transport parameter system is singular");

    auto solve_b = [&](std::span<const double> extras) -> std::pair<double, double> {
        double off_x = 0.0, off_v = 0.0;
        for (size_t k = 0; k < extras.size(); ++k) {
            off_x += extras[k] * extra_cols[k][0];
            off_v += extras[k] * extra_cols[k][1];
        }
        const double rhs1 = spec.d - off_x, rhs2 = -off_v;
        return {(rhs1 * r7[1] - rhs2 * r7[0]) / det, (r6[0] * rhs2 - r6[1] * rhs1) / det};
    };

    // Adiabatic reference per grid angle.
    const double m = opts.sim.m_load;
    std::vector<double> e_ad(theta0_grid.size());
    for (size_t i = 0; i < theta0_grid.size(); ++i) {
        const double theta_f =
            adiabatic_final_angle(spec.l0, spec.lf, std::fabs(theta0_grid[i]), m, spec.g);
        e_ad[i] = pendulum_energy_at_angle(spec.lf, theta_f, m, spec.g);
    }

    auto objective = [&](const std::vector<double>& extras) -> double {
        const auto [b6, b7] = solve_b(extras);
        const auto alpha = build_extended_transport_profile(b6, b7, extras, tf);
        double total = 0.0;
        for (size_t i = 0; i < theta0_grid.size(); ++i) {
            const OdeRhs rhs = [&](const OdeState& y, OdeState& dydt, double t) {
                const auto ro = rope_interp.rope(t);
                const double xddot = -(alpha.evaluate(t, 2) + omega2(t) * alpha.value(t));
                dydt[0] = y[1];
                dydt[1] = -(2.0 * ro.ldot * y[1] + spec.g * std::sin(y[0]) +
                            xddot * std::cos(y[0])) /
                          ro.l;
            };
            const auto end = integrate_endpoint(rhs, {theta0_grid[i], 0.0}, 0.0, tf, integ);
            const double e_f = 0.5 * m * spec.lf * spec.lf * end[1] * end[1] +
                               m * spec.g * spec.lf * (1.0 - std::cos(end[0]));
            total += std::fabs(e_f - e_ad[i]);
        }
        return total;
    };

    RobustResult out;
    out.objective_baseline = objective(zero_extras);
    out.evaluations = 1;

    std::vector<double> best = zero_extras;
    double best_f = out.objective_baseline;
    bool converged = true;
    if (n_extra > 0) {
        const auto [b6_base, b7_base] = solve_b(zero_extras);
        double step = opts.initial_step;
        if (step <= 0.0) step = 0.25 * std::max(std::fabs(b6_base), 1.0);
        for (int round = 0; round <= opts.restarts; ++round) {
            const auto res = nelder_mead(objective, best, step, opts.max_iterations, opts.f_tol);
            out.evaluations += res.evaluations;
            if (res.f < best_f) {
                best = res.x;
                best_f = res.f;
            }
            converged = res.converged;
            step *= 0.1;
        }
    }

    const auto [b6, b7] = solve_b(best);
    out.extras = best;
    out.b6 = b6;
    out.b7 = b7;
    out.objective = best_f;
    out.converged = converged || best_f <= out.objective_baseline;
    out.transport = build_extended_transport_profile(b6, b7, best, tf);
    SWAY_LOG_INFO("robust transport: objective %.3e -> %.3e after %d evaluations",
                  out.objective_baseline, best_f, out.evaluations);
    return out;
}

}  // namespace sway
