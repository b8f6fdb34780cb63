#pragma once

namespace sway {

/// Physical setup and goal of one crane operation: hoist/lower the rope from
/// l0 to lf while moving the trolley by d, all within tf.
struct ScenarioSpec {
    double l0 = 10.0;          // initial rope length, m
    double lf = 10.0;          // final rope length, m
    double d = 0.0;            // trolley displacement, m
    double tf = 10.0;          // operation duration, s
    double g = 9.81;           // gravitational acceleration, m/s^2
    double m_load = 1.0;       // payload mass, kg
    double M_trolley = 10.0;   // trolley mass, kg
    double friction = 0.0;     // trolley friction coefficient, kg/s

    /// Throws InvalidInput when a field is out of its physical range.
    void validate() const;

    double omega0() const;          // sqrt(g/l0)
    double omegaf() const;          // sqrt(g/lf)
    double gamma() const;           // (lf/l0)^{1/4}
    ScenarioSpec with_tf(double new_tf) const;
};

constexpr double deg_to_rad(double deg) { return deg * 3.14159265358979323846 / 180.0; }
constexpr double rad_to_deg(double rad) { return rad * 180.0 / 3.14159265358979323846; }

}  // namespace sway
