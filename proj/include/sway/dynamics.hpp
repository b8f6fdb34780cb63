#pragma once

#include <memory>
#include <vector>

#include "sway/control_law.hpp"
#include "sway/ode.hpp"

namespace sway {

enum class SimulationModel { exact, harmonic, coupled };

struct SimOptions {
    IntegrationOptions integration{};
    double m_load = 1.0;  // kg
};

/// Payload motion under given controls. The angle series is primary for the
/// exact model and derived through q = l sin(theta) for the harmonic one (and
/// vice versa). Energies follow the oscillation convention with zero
/// potential at theta = 0; they equal the shifted mechanical energy at the
/// boundary times only.
struct SimulationResult {
    SimulationModel model = SimulationModel::exact;
    std::vector<double> t;
    std::vector<double> theta, thetadot;  // rad, rad/s
    std::vector<double> q, qdot;          // m, m/s
    std::vector<double> energy;           // J
    std::vector<double> power;            // W; filled by the coupled model
    double m_load = 1.0;
    double gravity = 9.81;
    double l_final = 1.0;
    double E0 = 0.0;
    double Ef = 0.0;
    double theta_max_final = 0.0;  // NaN when over the top
    bool over_the_top = false;
    bool exceeded_half_pi = false;  // harmonic-regime validity warning
};

/// Integrate the full swing equation
///   l thetadd + 2 ldot thetadot + g sin(theta) + xddot cos(theta) = 0.
/// |theta| beyond pi/2 on route sets a warning flag; the result is still
/// returned.
SimulationResult simulate_exact(const ControlLaw& law, double theta0, double thetadot0,
                                const SimOptions& opts = {});

/// Integrate the small-oscillation model qdd + omega^2(t) q = -xddot.
SimulationResult simulate_harmonic(const ControlLaw& law, double q0, double qdot0,
                                   const SimOptions& opts = {});

/// Turning angle of the frozen pendulum after the protocol ends (controls at
/// rest): cos(theta_max) = cos(theta_f) - l thetadot_f^2 / (2g). Throws
/// OverTheTop when the residual energy is too high for libration.
double final_max_angle(const SimulationResult& result, double l_final);

/// Actuating force on the trolley and its power, from the coupled
/// trolley-payload equations, plus the small-oscillation power form for
/// comparison.
struct PowerSeries {
    std::vector<double> t;
    std::vector<double> force;        // N
    std::vector<double> power;        // W, full form
    std::vector<double> power_small;  // W, small-oscillation form
};

PowerSeries actuating_force_and_power(const ControlLaw& law, const SimulationResult& exact_result,
                                      double M_trolley, double friction);

/// Mechanical energy of trolley plus payload (potential zero at the
/// suspension level), for power bookkeeping on constant-rope transports.
double mechanical_energy(const ControlLaw& law, const SimulationResult& exact_result, size_t i,
                         double M_trolley);

/// Bang-coast-bang transport baseline: accelerate at a_max for one
/// oscillation period T, coast for t_c, decelerate for T.
struct ThreeStepParams {
    double a_max;  // m/s^2
    double T;      // s, acceleration leg
    double t_c;    // s, coast
    double duration() const { return 2.0 * T + t_c; }
    double displacement() const { return a_max * T * (T + t_c); }
};

class ThreeStepLaw final : public ControlLaw {
public:
    ThreeStepLaw(const ThreeStepParams& params, double l, double g);

    double duration() const override { return params_.duration(); }
    double gravity() const override { return g_; }
    RopeState rope(double) const override { return {l_, 0.0, 0.0}; }
    TrolleyState trolley(double t) const override;
    double omega2(double) const override { return g_ / l_; }
    std::vector<double> breakpoints() const override;

    const ThreeStepParams& params() const { return params_; }

private:
    ThreeStepParams params_;
    double l_, g_;
};

/// Sampled form of the three-step baseline.
ControlTrajectory three_step_trajectory(const ThreeStepParams& params, double l, double g,
                                        int grid_points = 2001);

}  // namespace sway
