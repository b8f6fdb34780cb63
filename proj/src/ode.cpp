#include "sway/ode.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/numeric/odeint.hpp>

#include "sway/errors.hpp"

namespace sway {

namespace odeint = boost::numeric::odeint;

namespace {

using Stepper = odeint::runge_kutta_fehlberg78<OdeState>;

struct RhsAdapter {
    const OdeRhs* rhs;
    void operator()(const OdeState& y, OdeState& dydt, double t) const { (*rhs)(y, dydt, t); }
};

// Splice interior breakpoints into [t0, t1] so each smooth piece is
// integrated separately.
std::vector<double> segment_edges(double t0, double t1, std::span<const double> breakpoints) {
    std::vector<double> edges{t0};
    for (double b : breakpoints)
        if (b > t0 + 1e-12 && b < t1 - 1e-12) edges.push_back(b);
    std::sort(edges.begin(), edges.end());
    edges.push_back(t1);
    return edges;
}

void advance(const OdeRhs& rhs, OdeState& y, double t0, double t1, double dt_max,
             const IntegrationOptions& opts) {
    if (t1 <= t0) return;
    auto controlled = odeint::make_controlled(opts.abs_tol, opts.rel_tol, Stepper());
    const int pieces = std::max(1, static_cast<int>(std::ceil((t1 - t0) / dt_max - 1e-12)));
    const double h = (t1 - t0) / pieces;
    for (int k = 0; k < pieces; ++k) {
        const double a = t0 + k * h;
        const double b = k + 1 == pieces ? t1 : t0 + (k + 1) * h;
        odeint::integrate_adaptive(controlled, RhsAdapter{&rhs}, y, a, b, b - a);
    }
}

}  // namespace

std::vector<OdeState> integrate_at_times(const OdeRhs& rhs, OdeState y0,
                                         std::span<const double> times,
                                         const IntegrationOptions& opts,
                                         std::span<const double> breakpoints) {
    if (times.empty()) return {};
    std::vector<OdeState> out;
    out.reserve(times.size());
    OdeState y = std::move(y0);
    double t = times.front();
    out.push_back(y);
    const double span = times.back() - times.front();
    const double dt_max = span > 0.0 ? span / std::max(1, opts.min_steps) : 1.0;
    const auto edges = segment_edges(times.front(), times.back(), breakpoints);
    size_t edge = 1;
    for (size_t i = 1; i < times.size(); ++i) {
        const double target = times[i];
        if (target < t - 1e-12) throw InvalidInput("integration times must be non-decreasing");
        while (edge < edges.size() && edges[edge] < target - 1e-12) {
            advance(rhs, y, t, edges[edge], dt_max, opts);
            t = edges[edge];
            ++edge;
        }
        advance(rhs, y, t, target, dt_max, opts);
        t = target;
        out.push_back(y);
    }
    return out;
}

OdeState integrate_endpoint(const OdeRhs& rhs, OdeState y0, double t0, double t1,
                            const IntegrationOptions& opts,
                            std::span<const double> breakpoints) {
    OdeState y = std::move(y0);
    const double span = t1 - t0;
    const double dt_max = span > 0.0 ? span / std::max(1, opts.min_steps) : 1.0;
    const auto edges = segment_edges(t0, t1, breakpoints);
    for (size_t i = 1; i < edges.size(); ++i)
        advance(rhs, y, edges[i - 1], edges[i], dt_max, opts);
    return y;
}

std::vector<double> uniform_grid(double tf, int n) {
    if (!(tf > 0.0) || n < 2) throw InvalidInput("grid needs tf > 0 and at least two points");
    std::vector<double> t(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) t[static_cast<size_t>(i)] = tf * static_cast<double>(i) / (n - 1);
    t.back() = tf;
    return t;
}

double integrate_series(std::span<const double> t, std::span<const double> y) {
    if (t.size() != y.size() || t.size() < 2) throw InvalidInput("series integral needs matched samples");
    const size_t n = t.size();
    const double h = t[1] - t[0];
    double acc = 0.0;
    size_t i = 0;
    for (; i + 2 < n; i += 2) acc += h / 3.0 * (y[i] + 4.0 * y[i + 1] + y[i + 2]);
    if (i + 2 == n) acc += 0.5 * h * (y[i] + y[i + 1]);  // odd trailing interval
    return acc;
}

}  // namespace sway
