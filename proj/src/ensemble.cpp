#include "sway/ensemble.hpp"

#include <cmath>
#include <stdexcept>

#include "sway/errors.hpp"

namespace sway {

namespace {

constexpr double kTwoPi = 6.28318530717958647692;

// splitmix64: cheap counter-keyed generator; sample i depends only on
// (seed, i), which keeps parallel or reordered evaluation deterministic.
std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

double uniform01(std::uint64_t seed, std::uint64_t counter) {
    const std::uint64_t z = splitmix64(seed ^ splitmix64(counter + 1));
    return static_cast<double>(z >> 11) * 0x1.0p-53;
}

}  // namespace

MonodromyMatrix compute_monodromy(const std::function<double(double)>& omega2, double tf,
                                  double m_load, const IntegrationOptions& opts) {
    if (!(tf > 0.0) || !(m_load > 0.0)) throw InvalidInput("monodromy needs positive tf and mass");
    const OdeRhs rhs = [&](const OdeState& y, OdeState& dydt, double t) {
        dydt[0] = y[1] / m_load;
        dydt[1] = -m_load * omega2(t) * y[0];
    };
    const auto col1 = integrate_endpoint(rhs, {1.0, 0.0}, 0.0, tf, opts);
    const auto col2 = integrate_endpoint(rhs, {0.0, 1.0}, 0.0, tf, opts);
    MonodromyMatrix flow;
    flow.a = col1[0];
    flow.c = col1[1];
    flow.b = col2[0];
    flow.d = col2[1];
    return flow;
}

ForcedResponse forced_response(const ControlLaw& law, double m_load,
                               const IntegrationOptions& opts) {
    const OdeRhs rhs = [&](const OdeState& y, OdeState& dydt, double t) {
        dydt[0] = y[1] / m_load;
        dydt[1] = -m_load * (law.omega2(t) * y[0] + law.trolley(t).xddot);
    };
    const auto bps = law.breakpoints();
    const auto end = integrate_endpoint(rhs, {0.0, 0.0}, 0.0, law.duration(), opts, bps);
    ForcedResponse out;
    out.q = end[0];
    out.p = end[1];
    const double omegaf2 = law.omega2(law.duration());
    out.energy = out.p * out.p / (2.0 * m_load) + 0.5 * m_load * omegaf2 * out.q * out.q;
    return out;
}

EnsembleSummary microcanonical_average(const MonodromyMatrix& flow, double E0, double omega0,
                                       double omegaf, double m_load) {
    return microcanonical_average(flow, ForcedResponse{}, E0, omega0, omegaf, m_load);
}

EnsembleSummary microcanonical_average(const MonodromyMatrix& flow, const ForcedResponse& forced,
                                       double E0, double omega0, double omegaf, double m_load) {
    if (!(omega0 > 0.0) || !(omegaf > 0.0) || !(m_load > 0.0))
        throw InvalidInput("frequencies and mass must be positive");
    if (std::fabs(flow.det() - 1.0) > 1e-6)
        throw InvalidInput("monodromy determinant departs from one");

    EnsembleSummary s;
    s.E0 = E0;
    const double a = flow.a, b = flow.b, c = flow.c, d = flow.d;
    const double w0 = omega0, wf = omegaf, m = m_load;
    s.alpha_bar = c * c / (m * m * w0 * w0) + a * a * wf * wf / (w0 * w0);
    s.beta_bar = d * d + wf * wf * m * m * b * b;
    s.eta_bar = c * d / (m * w0) + a * b * m * wf * wf / w0;
    s.adiabatic_energy = E0 * wf / w0;
    s.forced_energy_shift = forced.energy;
    const double mean_hom = 0.5 * E0 * (s.alpha_bar + s.beta_bar);
    s.mean_final_energy = mean_hom + forced.energy;

    // Variance of the homogeneous part; consistent with
    // (E0^2/2) [ (mean/E0)^2 - (wf/w0)^2 ] when det = 1.
    double variance = 0.5 * E0 * E0 *
                      ((mean_hom / E0) * (mean_hom / E0) - (wf / w0) * (wf / w0));
    if (variance < 0.0) {
        if (variance < -1e-9 * E0 * E0)
            throw std::logic_error("microcanonical variance came out negative");
        variance = 0.0;
    }
    s.variance = variance;
    return s;
}

double MonteCarloResult::std_error() const {
    const size_t n = final_energy.size();
    return n > 1 ? std::sqrt(variance / static_cast<double>(n)) : 0.0;
}

MonteCarloResult monte_carlo_average(const ControlLaw& law, double E0, int n_samples,
                                     std::uint64_t seed, double m_load,
                                     const IntegrationOptions& opts) {
    if (n_samples < 1) throw InvalidInput("need at least one sample");
    if (!(E0 > 0.0) || !(m_load > 0.0)) throw InvalidInput("E0 and mass must be positive");
    const double omega0_sq = law.omega2(0.0);
    const double omegaf_sq = law.omega2(law.duration());
    const double q_amp = std::sqrt(2.0 * E0 / (m_load * omega0_sq));
    const double p_amp = std::sqrt(2.0 * m_load * E0);
    const auto bps = law.breakpoints();

    const OdeRhs rhs = [&](const OdeState& y, OdeState& dydt, double t) {
        dydt[0] = y[1] / m_load;
        dydt[1] = -m_load * (law.omega2(t) * y[0] + law.trolley(t).xddot);
    };

    MonteCarloResult out;
    out.phi.resize(static_cast<size_t>(n_samples));
    out.final_energy.resize(static_cast<size_t>(n_samples));
    for (int i = 0; i < n_samples; ++i) {
        const double phi = kTwoPi * uniform01(seed, static_cast<std::uint64_t>(i));
        const double q0 = q_amp * std::cos(phi);
        const double p0 = p_amp * std::sin(phi);
        const auto end = integrate_endpoint(rhs, {q0, p0}, 0.0, law.duration(), opts, bps);
        const double ef =
            end[1] * end[1] / (2.0 * m_load) + 0.5 * m_load * omegaf_sq * end[0] * end[0];
        out.phi[static_cast<size_t>(i)] = phi;
        out.final_energy[static_cast<size_t>(i)] = ef;
    }

    double mean = 0.0;
    for (double e : out.final_energy) mean += e;
    mean /= static_cast<double>(n_samples);
    double var = 0.0;
    for (double e : out.final_energy) var += (e - mean) * (e - mean);
    var = n_samples > 1 ? var / static_cast<double>(n_samples - 1) : 0.0;
    out.mean = mean;
    out.variance = var;
    return out;
}

}  // namespace sway
