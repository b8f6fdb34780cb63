#pragma once

namespace sway {

/// Incomplete elliptic integral of the second kind E(phi | v), parameter
/// convention. Parameters above one are reduced to 1/v through the
/// reciprocal-modulus identity before evaluation; the reachable domain
/// requires sqrt(v) sin(phi) <= 1.
double incomplete_elliptic_e(double phi, double v);

/// Phase-space area of one pendulum libration cycle at fixed rope length,
/// by adaptive quadrature of the action integral (the endpoint square-root
/// singularity is removed by substitution first). J*s.
double invariant_area(double l, double theta_max, double m_load, double g);

/// Same area through the closed elliptic-integral form; kept as an
/// independent cross-check of invariant_area.
double invariant_area_elliptic(double l, double theta_max, double m_load, double g);

/// Exact adiabatic turning angle at lf for a payload that librates up to
/// theta_max0 at l0, by matching invariant areas. Monotonicity of the area
/// in the angle makes the root unique. Throws OverTheTop when no librating
/// angle at lf carries that much area.
double adiabatic_final_angle(double l0, double lf, double theta_max0, double m_load = 1.0,
                             double g = 9.81);

/// Small-oscillation adiabatic energy E0 * omega_f / omega_0.
double adiabatic_energy_small_osc(double E0, double omega0, double omegaf);

/// Pendulum oscillation energy at a turning angle (zero potential at
/// theta = 0): m g l (1 - cos theta_max).
double pendulum_energy_at_angle(double l, double theta_max, double m_load, double g);

}  // namespace sway
