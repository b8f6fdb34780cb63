#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "sway/control_law.hpp"
#include "sway/ode.hpp"

namespace sway {

/// Linear phase-flow map (q0, p0) -> (qf, pf) of the homogeneous harmonic
/// dynamics over [0, tf]. Area preservation pins the determinant to one.
struct MonodromyMatrix {
    double a = 1.0, b = 0.0;
    double c = 0.0, d = 1.0;
    double det() const { return a * d - b * c; }
};

/// Assemble the monodromy matrix by integrating the two basis initial
/// conditions (q, p) = (1, 0) and (0, 1).
MonodromyMatrix compute_monodromy(const std::function<double(double)>& omega2, double tf,
                                  double m_load, const IntegrationOptions& opts = {});

/// End state of the forced response from rest:
/// the affine shift of the phase-flow map. It vanishes for designed
/// protocols, where the transport function returns to zero at tf.
struct ForcedResponse {
    double q = 0.0;       // m
    double p = 0.0;       // kg m/s
    double energy = 0.0;  // J, oscillation energy of the shift at tf
};

ForcedResponse forced_response(const ControlLaw& law, double m_load,
                               const IntegrationOptions& opts = {});

/// Microcanonical (uniform phase) statistics of the final energy. The closed
/// form covers the homogeneous flow; `forced_energy_shift` carries the
/// additive contribution of a non-vanishing forced response when the caller
/// supplies one (zero for designed protocols).
struct EnsembleSummary {
    double E0 = 0.0;
    double mean_final_energy = 0.0;  // J
    double variance = 0.0;           // J^2
    double adiabatic_energy = 0.0;   // J
    double alpha_bar = 0.0;
    double beta_bar = 0.0;
    double eta_bar = 0.0;
    double forced_energy_shift = 0.0;  // J, included in mean_final_energy
};

EnsembleSummary microcanonical_average(const MonodromyMatrix& flow, double E0, double omega0,
                                       double omegaf, double m_load);

EnsembleSummary microcanonical_average(const MonodromyMatrix& flow, const ForcedResponse& forced,
                                       double E0, double omega0, double omegaf, double m_load);

/// Brute-force oracle: sample the initial phase uniformly, simulate the
/// forced harmonic model per sample, and average the final energies. A single
/// 64-bit seed determines every sample independently of execution order.
struct MonteCarloResult {
    double mean = 0.0;      // J
    double variance = 0.0;  // J^2, unbiased sample variance
    std::vector<double> phi;
    std::vector<double> final_energy;
    double std_error() const;
};

MonteCarloResult monte_carlo_average(const ControlLaw& law, double E0, int n_samples,
                                     std::uint64_t seed, double m_load,
                                     const IntegrationOptions& opts = {});

}  // namespace sway
