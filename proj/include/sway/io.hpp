#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sway/control_law.hpp"
#include "sway/dynamics.hpp"
#include "sway/ensemble.hpp"
#include "sway/inverse_design.hpp"
#include "sway/planner.hpp"
#include "sway/scenario.hpp"

namespace sway::io {

/// 17 significant digits, '.' decimal separator, locale-independent; enough
/// to round-trip any double exactly.
std::string format_double(double value);

/// Strict double parse of a whole field; throws InvalidInput on trailing
/// garbage.
double parse_double(const std::string& field);

// ---- trajectory and simulation series -------------------------------------

void write_trajectory_csv(const std::string& path, const ControlTrajectory& traj);

/// Reads a trajectory CSV. Gravity is recovered from the kinematic relation
/// g = omega2 * l + lddot on the first row and checked across the file.
ControlTrajectory read_trajectory_csv(const std::string& path);

void write_simulation_csv(const std::string& path, const SimulationResult& result,
                          const PowerSeries* power = nullptr);

void write_histogram_csv(const std::string& path, const MonteCarloResult& mc);

// ---- scenario files --------------------------------------------------------

struct SweepConfig {
    std::vector<double> theta0 = {};      // rad
    std::vector<double> tf = {};          // s
    bool both_directions = false;
    bool include_adiabatic = true;
    bool include_ensemble = false;
};

struct MinTimeCase {
    double d = 0.0;
    double l0 = 0.0;
    double lf = 0.0;
};

/// Parsed scenario document: physical spec, bounds, mode flags, numerics.
struct ScenarioFile {
    ScenarioSpec spec;
    ConstraintSet constraints;
    bool constraints_given = false;
    std::string mode = "dual";                         // dual | sequential
    std::string sequential_order = "transport_first";  // or hoist_first
    std::optional<double> t_transport;                 // s
    std::optional<double> t_hoist;                     // s
    std::string model = "exact";                       // exact | harmonic | coupled
    double theta0 = 0.0;                               // rad
    double thetadot0 = 0.0;                            // rad/s
    int grid_points = 2001;
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    std::uint64_t seed = 0;
    std::vector<double> alpha_extras;
    std::optional<SweepConfig> sweep;
    std::vector<MinTimeCase> cases;

    DesignOptions design_options() const;
    SimOptions sim_options() const;
};

/// Loads and validates a scenario JSON document. Unknown keys and malformed
/// values are rejected with line/column diagnostics in the message.
ScenarioFile load_scenario(const std::string& path);

// ---- summaries -------------------------------------------------------------

std::string design_summary_json(const ScenarioFile& scenario, const DesignedProtocol& protocol);

std::string simulation_summary_json(const SimulationResult& result, double omega0, double omegaf,
                                    double theta0, double thetadot0);

std::string ensemble_summary_json(const EnsembleSummary& summary, const MonteCarloResult* mc);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace sway::io
