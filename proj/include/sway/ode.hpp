#pragma once

#include <functional>
#include <span>
#include <vector>

namespace sway {

/// Tolerances and grid defaults shared by every integration in the toolkit.
/// The residual checks downstream assume the tight defaults.
struct IntegrationOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    int grid_points = 2001;
    /// Lower bound on the number of steps across the full span. Embedded
    /// error estimates degenerate on state-independent right-hand sides
    /// (pure quadrature), where huge steps would pass the controller while
    /// the true error grows; the cap keeps every integration honest.
    int min_steps = 64;
};

using OdeState = std::vector<double>;
/// Right-hand side: dydt = f(y, t).
using OdeRhs = std::function<void(const OdeState&, OdeState&, double)>;

/// Integrate from y0 at times.front() and record the state at every requested
/// time. `times` must be non-decreasing. Integration restarts at each interior
/// breakpoint so discontinuous forcing keeps full order.
std::vector<OdeState> integrate_at_times(const OdeRhs& rhs, OdeState y0,
                                         std::span<const double> times,
                                         const IntegrationOptions& opts = {},
                                         std::span<const double> breakpoints = {});

/// Integrate from t0 to t1 and return only the final state.
OdeState integrate_endpoint(const OdeRhs& rhs, OdeState y0, double t0, double t1,
                            const IntegrationOptions& opts = {},
                            std::span<const double> breakpoints = {});

/// Uniform grid of n points covering [0, tf].
std::vector<double> uniform_grid(double tf, int n);

/// Composite Simpson integral of samples on a uniform grid (odd point count
/// preferred; a trapezoid patch covers a trailing odd interval).
double integrate_series(std::span<const double> t, std::span<const double> y);

}  // namespace sway
