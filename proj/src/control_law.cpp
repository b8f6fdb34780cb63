#include "sway/control_law.hpp"

#include <algorithm>
#include <cmath>

#include "sway/errors.hpp"
#include "sway/ode.hpp"

namespace sway {

void ControlTrajectory::validate() const {
    const size_t n = t.size();
    if (n < 2) throw InvalidInput("trajectory needs at least two samples");
    auto check = [&](const std::vector<double>& v, const char* name) {
        if (v.size() != n) throw InvalidInput(std::string("trajectory column size mismatch: ") + name);
    };
    check(l, "l");
    check(ldot, "ldot");
    check(lddot, "lddot");
    check(x, "x");
    check(xdot, "xdot");
    check(xddot, "xddot");
    check(omega2, "omega2");
    if (std::fabs(t.front()) > 1e-12) throw InvalidInput("trajectory grid must start at 0");
    for (size_t i = 1; i < n; ++i)
        if (!(t[i] > t[i - 1])) throw InvalidInput("trajectory grid must be strictly increasing");
    for (double li : l)
        if (!(li > 0.0)) throw InvalidInput("rope length must stay positive");
    if (!(gravity > 0.0)) throw InvalidInput("gravity must be positive");
}

ControlTrajectory sample_law(const ControlLaw& law, int grid_points,
                             const DesignParameters& params) {
    const auto grid = uniform_grid(law.duration(), grid_points);
    ControlTrajectory traj;
    traj.t = grid;
    const size_t n = grid.size();
    traj.l.resize(n);
    traj.ldot.resize(n);
    traj.lddot.resize(n);
    traj.x.resize(n);
    traj.xdot.resize(n);
    traj.xddot.resize(n);
    traj.omega2.resize(n);
    for (size_t i = 0; i < n; ++i) {
        const auto r = law.rope(grid[i]);
        const auto c = law.trolley(grid[i]);
        traj.l[i] = r.l;
        traj.ldot[i] = r.ldot;
        traj.lddot[i] = r.lddot;
        traj.x[i] = c.x;
        traj.xdot[i] = c.xdot;
        traj.xddot[i] = c.xddot;
        traj.omega2[i] = law.omega2(grid[i]);
    }
    traj.params = params;
    traj.gravity = law.gravity();
    return traj;
}

namespace {

// Quintic Hermite segment pinned by value, slope and curvature at both ends.
struct Quintic {
    double value, slope, curvature;
};

Quintic quintic_eval(double t0, double t1, double y0, double v0, double a0, double y1, double v1,
                     double a1, double t) {
    const double h = t1 - t0;
    const double s = (t - t0) / h;
    const double s2 = s * s, s3 = s2 * s, s4 = s3 * s, s5 = s4 * s;

    const double H0 = 1.0 - 10.0 * s3 + 15.0 * s4 - 6.0 * s5;
    const double H1 = s - 6.0 * s3 + 8.0 * s4 - 3.0 * s5;
    const double H2 = 0.5 * s2 - 1.5 * s3 + 1.5 * s4 - 0.5 * s5;
    const double H3 = 10.0 * s3 - 15.0 * s4 + 6.0 * s5;
    const double H4 = -4.0 * s3 + 7.0 * s4 - 3.0 * s5;
    const double H5 = 0.5 * s3 - s4 + 0.5 * s5;

    const double d0 = -30.0 * s2 + 60.0 * s3 - 30.0 * s4;
    const double d1 = 1.0 - 18.0 * s2 + 32.0 * s3 - 15.0 * s4;
    const double d2 = s - 4.5 * s2 + 6.0 * s3 - 2.5 * s4;
    const double d3 = 30.0 * s2 - 60.0 * s3 + 30.0 * s4;
    const double d4 = -12.0 * s2 + 28.0 * s3 - 15.0 * s4;
    const double d5 = 1.5 * s2 - 4.0 * s3 + 2.5 * s4;

    const double c0 = -60.0 * s + 180.0 * s2 - 120.0 * s3;
    const double c1 = -36.0 * s + 96.0 * s2 - 60.0 * s3;
    const double c2 = 1.0 - 9.0 * s + 18.0 * s2 - 10.0 * s3;
    const double c3 = 60.0 * s - 180.0 * s2 + 120.0 * s3;
    const double c4 = -24.0 * s + 84.0 * s2 - 60.0 * s3;
    const double c5 = 3.0 * s - 12.0 * s2 + 10.0 * s3;

    Quintic out;
    out.value = y0 * H0 + h * v0 * H1 + h * h * a0 * H2 + y1 * H3 + h * v1 * H4 + h * h * a1 * H5;
    out.slope = (y0 * d0 + h * v0 * d1 + h * h * a0 * d2 + y1 * d3 + h * v1 * d4 + h * h * a1 * d5) / h;
    out.curvature =
        (y0 * c0 + h * v0 * c1 + h * h * a0 * c2 + y1 * c3 + h * v1 * c4 + h * h * a1 * c5) / (h * h);
    return out;
}

}  // namespace

SampledControlLaw::SampledControlLaw(ControlTrajectory trajectory)
    : trajectory_(std::move(trajectory)) {
    trajectory_.validate();
}

double SampledControlLaw::duration() const { return trajectory_.t.back(); }

size_t SampledControlLaw::segment(double t) const {
    const auto& grid = trajectory_.t;
    const double slack = 1e-9 * std::max(grid.back(), 1.0);
    if (t < grid.front() - slack || t > grid.back() + slack)
        throw DomainError("control law evaluated outside [0, tf]");
    const auto it = std::upper_bound(grid.begin(), grid.end(), t);
    size_t i = static_cast<size_t>(std::distance(grid.begin(), it));
    if (i == 0) return 0;
    if (i >= grid.size()) return grid.size() - 2;
    return i - 1;
}

RopeState SampledControlLaw::rope(double t) const {
    const size_t i = segment(t);
    const auto& tr = trajectory_;
    const auto q = quintic_eval(tr.t[i], tr.t[i + 1], tr.l[i], tr.ldot[i], tr.lddot[i],
                                tr.l[i + 1], tr.ldot[i + 1], tr.lddot[i + 1], t);
    return {q.value, q.slope, q.curvature};
}

TrolleyState SampledControlLaw::trolley(double t) const {
    const size_t i = segment(t);
    const auto& tr = trajectory_;
    const auto q = quintic_eval(tr.t[i], tr.t[i + 1], tr.x[i], tr.xdot[i], tr.xddot[i],
                                tr.x[i + 1], tr.xdot[i + 1], tr.xddot[i + 1], t);
    return {q.value, q.slope, q.curvature};
}

double SampledControlLaw::omega2(double t) const {
    const auto r = rope(t);
    return (trajectory_.gravity - r.lddot) / r.l;
}

FrozenControlLaw::FrozenControlLaw(double l, double x, double duration, double g)
    : l_(l), x_(x), duration_(duration), g_(g) {
    if (!(l > 0.0) || !(duration > 0.0) || !(g > 0.0))
        throw InvalidInput("frozen law needs positive length, duration and gravity");
}

}  // namespace sway
