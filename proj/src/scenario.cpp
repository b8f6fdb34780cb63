#include "sway/scenario.hpp"

#include <cmath>

#include "sway/errors.hpp"

namespace sway {

void ScenarioSpec::validate() const {
    if (!(l0 > 0.0)) throw InvalidInput("initial rope length must be positive");
    if (!(lf > 0.0)) throw InvalidInput("final rope length must be positive");
    if (!(tf > 0.0)) throw InvalidInput("duration must be positive");
    if (d < 0.0) throw InvalidInput("trolley displacement must be non-negative");
    if (!(g > 0.0)) throw InvalidInput("gravity must be positive");
    if (m_load < 0.0 || M_trolley < 0.0) throw InvalidInput("masses must be non-negative");
    if (friction < 0.0) throw InvalidInput("friction coefficient must be non-negative");
}

double ScenarioSpec::omega0() const { return std::sqrt(g / l0); }
double ScenarioSpec::omegaf() const { return std::sqrt(g / lf); }
double ScenarioSpec::gamma() const { return std::pow(lf / l0, 0.25); }

ScenarioSpec ScenarioSpec::with_tf(double new_tf) const {
    ScenarioSpec copy = *this;
    copy.tf = new_tf;
    return copy;
}

}  // namespace sway
