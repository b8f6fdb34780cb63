#pragma once

#include <memory>
#include <vector>

namespace sway {

struct RopeState {
    double l;      // m
    double ldot;   // m/s
    double lddot;  // m/s^2
};

struct TrolleyState {
    double x;      // m
    double xdot;   // m/s
    double xddot;  // m/s^2
};

/// Control functions of one protocol, evaluable at any time in [0, duration].
/// Implementations are immutable and safe for concurrent reads.
class ControlLaw {
public:
    virtual ~ControlLaw() = default;

    virtual double duration() const = 0;
    virtual double gravity() const = 0;
    virtual RopeState rope(double t) const = 0;
    virtual TrolleyState trolley(double t) const = 0;
    /// Squared swing frequency g/l - lddot/l.
    virtual double omega2(double t) const = 0;
    /// Interior times where the forcing is discontinuous; integrators restart
    /// there.
    virtual std::vector<double> breakpoints() const { return {}; }
};

/// Free parameters of a designed protocol (top scaling and transport
/// polynomial coefficients plus any robustness extension).
struct DesignParameters {
    double a6 = 0.0;
    double a7 = 0.0;
    double b6 = 0.0;
    double b7 = 0.0;
    std::vector<double> extras;
};

/// Dense samples of the control functions on a strictly increasing grid that
/// covers [0, tf]. This is the on-disk exchange format; consumers that need
/// off-grid values interpolate through SampledControlLaw.
struct ControlTrajectory {
    std::vector<double> t;
    std::vector<double> l, ldot, lddot;
    std::vector<double> x, xdot, xddot;
    std::vector<double> omega2;
    DesignParameters params;
    double gravity = 9.81;

    double duration() const { return t.empty() ? 0.0 : t.back(); }
    void validate() const;  // throws InvalidInput on malformed series
};

/// Sample a law on a uniform grid.
ControlTrajectory sample_law(const ControlLaw& law, int grid_points,
                             const DesignParameters& params = {});

/// Control law backed by quintic Hermite interpolation of a sampled
/// trajectory. With value, slope and curvature pinned at every node, the
/// interpolant reproduces a smooth law to round-off on the default grid. The
/// squared frequency is recomputed as (g - lddot)/l so the kinematic relation
/// holds exactly along the interpolant.
class SampledControlLaw final : public ControlLaw {
public:
    explicit SampledControlLaw(ControlTrajectory trajectory);

    double duration() const override;
    double gravity() const override { return trajectory_.gravity; }
    RopeState rope(double t) const override;
    TrolleyState trolley(double t) const override;
    double omega2(double t) const override;

    const ControlTrajectory& trajectory() const { return trajectory_; }

private:
    size_t segment(double t) const;
    ControlTrajectory trajectory_;
};

/// Fixed rope length and parked trolley; the do-nothing protocol.
class FrozenControlLaw final : public ControlLaw {
public:
    FrozenControlLaw(double l, double x, double duration, double g);

    double duration() const override { return duration_; }
    double gravity() const override { return g_; }
    RopeState rope(double) const override { return {l_, 0.0, 0.0}; }
    TrolleyState trolley(double) const override { return {x_, 0.0, 0.0}; }
    double omega2(double) const override { return g_ / l_; }

private:
    double l_, x_, duration_, g_;
};

}  // namespace sway
