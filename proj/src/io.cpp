#include "sway/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "sway/errors.hpp"
#include "sway/version.hpp"

namespace sway::io {

using nlohmann::ordered_json;

std::string format_double(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& field) {
    double value = 0.0;
    const char* begin = field.data();
    const char* end = begin + field.size();
    const auto res = std::from_chars(begin, end, value);
    if (res.ec != std::errc{} || res.ptr != end)
        throw InvalidInput("malformed numeric field: '" + field + "'");
    return value;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidInput("cannot open for writing: " + path);
    out << content;
    if (!out) throw InvalidInput("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInput("cannot open for reading: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// ---- trajectory CSV ---------------------------------------------------------

static const char* kTrajectoryHeader = "t,l,ldot,lddot,x,xdot,xddot,omega2";

void write_trajectory_csv(const std::string& path, const ControlTrajectory& traj) {
    traj.validate();
    std::ostringstream out;
    out << kTrajectoryHeader << '\n';
    for (size_t i = 0; i < traj.t.size(); ++i) {
        out << format_double(traj.t[i]) << ',' << format_double(traj.l[i]) << ','
            << format_double(traj.ldot[i]) << ',' << format_double(traj.lddot[i]) << ','
            << format_double(traj.x[i]) << ',' << format_double(traj.xdot[i]) << ','
            << format_double(traj.xddot[i]) << ',' << format_double(traj.omega2[i]) << '\n';
    }
    write_text_file(path, out.str());
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    return fields;
}

}  // namespace

ControlTrajectory read_trajectory_csv(const std::string& path) {
    std::istringstream in(read_text_file(path));
    std::string line;
    if (!std::getline(in, line)) throw InvalidInput("empty trajectory file: " + path);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kTrajectoryHeader)
        throw InvalidInput("unexpected trajectory header in " + path + ": '" + line + "'");

    ControlTrajectory traj;
    size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 8)
            throw InvalidInput(path + ":" + std::to_string(line_no) + ": expected 8 columns");
        traj.t.push_back(parse_double(fields[0]));
        traj.l.push_back(parse_double(fields[1]));
        traj.ldot.push_back(parse_double(fields[2]));
        traj.lddot.push_back(parse_double(fields[3]));
        traj.x.push_back(parse_double(fields[4]));
        traj.xdot.push_back(parse_double(fields[5]));
        traj.xddot.push_back(parse_double(fields[6]));
        traj.omega2.push_back(parse_double(fields[7]));
    }
    if (traj.t.size() < 2) throw InvalidInput("trajectory has fewer than two samples: " + path);

    // Recover gravity from the kinematic relation and check consistency.
    traj.gravity = traj.omega2.front() * traj.l.front() + traj.lddot.front();
    for (size_t i = 0; i < traj.t.size(); ++i) {
        const double g_i = traj.omega2[i] * traj.l[i] + traj.lddot[i];
        if (std::fabs(g_i - traj.gravity) > 1e-6 * std::max(traj.gravity, 1.0))
            throw InvalidInput("trajectory rows disagree on gravity; file corrupt?");
    }
    traj.validate();
    return traj;
}

void write_simulation_csv(const std::string& path, const SimulationResult& result,
                          const PowerSeries* power) {
    std::ostringstream out;
    out << "t,theta,thetadot,q,qdot,E,P\n";
    for (size_t i = 0; i < result.t.size(); ++i) {
        const double p = power != nullptr ? power->power[i] : 0.0;
        out << format_double(result.t[i]) << ',' << format_double(result.theta[i]) << ','
            << format_double(result.thetadot[i]) << ',' << format_double(result.q[i]) << ','
            << format_double(result.qdot[i]) << ',' << format_double(result.energy[i]) << ','
            << format_double(p) << '\n';
    }
    write_text_file(path, out.str());
}

void write_histogram_csv(const std::string& path, const MonteCarloResult& mc) {
    std::ostringstream out;
    out << "phi,Ef\n";
    for (size_t i = 0; i < mc.phi.size(); ++i)
        out << format_double(mc.phi[i]) << ',' << format_double(mc.final_energy[i]) << '\n';
    write_text_file(path, out.str());
}

// ---- scenario files ----------------------------------------------------------

namespace {

[[noreturn]] void scenario_error(const std::string& path, const std::string& message) {
    throw InvalidInput("scenario " + path + ": " + message);
}

std::pair<int, int> line_column(const std::string& text, size_t byte) {
    int line = 1, column = 1;
    for (size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return {line, column};
}

void reject_unknown_keys(const ordered_json& obj, std::initializer_list<const char*> allowed,
                         const std::string& path, const std::string& where) {
    for (const auto& item : obj.items()) {
        bool known = false;
        for (const char* k : allowed)
            if (item.key() == k) known = true;
        if (!known) scenario_error(path, "unknown key '" + item.key() + "' in " + where);
    }
}

double require_number(const ordered_json& obj, const char* key, const std::string& path) {
    if (!obj.contains(key)) scenario_error(path, std::string("missing key '") + key + "'");
    if (!obj[key].is_number()) scenario_error(path, std::string("key '") + key + "' must be a number");
    return obj[key].get<double>();
}

double optional_number(const ordered_json& obj, const char* key, double fallback,
                       const std::string& path) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number()) scenario_error(path, std::string("key '") + key + "' must be a number");
    return obj[key].get<double>();
}

std::vector<double> number_list(const ordered_json& value, const char* key,
                                const std::string& path) {
    if (!value.is_array()) scenario_error(path, std::string("key '") + key + "' must be an array");
    std::vector<double> out;
    for (const auto& v : value) {
        if (!v.is_number()) scenario_error(path, std::string("key '") + key + "' must hold numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

}  // namespace

DesignOptions ScenarioFile::design_options() const {
    DesignOptions opts;
    opts.integration.rel_tol = rel_tol;
    opts.integration.abs_tol = abs_tol;
    opts.integration.grid_points = grid_points;
    return opts;
}

SimOptions ScenarioFile::sim_options() const {
    SimOptions opts;
    opts.integration.rel_tol = rel_tol;
    opts.integration.abs_tol = abs_tol;
    opts.integration.grid_points = grid_points;
    opts.m_load = spec.m_load;
    return opts;
}

ScenarioFile load_scenario(const std::string& path) {
    const std::string text = read_text_file(path);
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& err) {
        const auto [line, column] = line_column(text, err.byte > 0 ? err.byte - 1 : 0);
        scenario_error(path, "parse error at line " + std::to_string(line) + ", column " +
                                 std::to_string(column) + ": " + err.what());
    }
    if (!doc.is_object()) scenario_error(path, "top level must be an object");

    reject_unknown_keys(doc,
                        {"l0_m", "lf_m", "d_m", "tf_s", "g_mps2", "m_load_kg", "M_trolley_kg",
                         "friction_kgps", "mode", "sequential_order", "t_transport_s", "t_hoist_s",
                         "model", "theta0_deg", "thetadot0_degps", "grid_points", "rel_tol",
                         "abs_tol", "seed", "alpha_extras", "constraints", "sweep", "cases"},
                        path, "scenario");

    ScenarioFile sf;
    sf.spec.l0 = optional_number(doc, "l0_m", sf.spec.l0, path);
    sf.spec.lf = optional_number(doc, "lf_m", sf.spec.lf, path);
    sf.spec.d = optional_number(doc, "d_m", sf.spec.d, path);
    sf.spec.tf = optional_number(doc, "tf_s", sf.spec.tf, path);
    sf.spec.g = optional_number(doc, "g_mps2", sf.spec.g, path);
    sf.spec.m_load = optional_number(doc, "m_load_kg", sf.spec.m_load, path);
    sf.spec.M_trolley = optional_number(doc, "M_trolley_kg", sf.spec.M_trolley, path);
    sf.spec.friction = optional_number(doc, "friction_kgps", sf.spec.friction, path);

    if (doc.contains("mode")) {
        sf.mode = doc["mode"].get<std::string>();
        if (sf.mode != "dual" && sf.mode != "sequential")
            scenario_error(path, "mode must be 'dual' or 'sequential'");
    }
    if (doc.contains("sequential_order")) {
        sf.sequential_order = doc["sequential_order"].get<std::string>();
        if (sf.sequential_order != "transport_first" && sf.sequential_order != "hoist_first")
            scenario_error(path, "sequential_order must be 'transport_first' or 'hoist_first'");
    }
    if (doc.contains("t_transport_s")) sf.t_transport = require_number(doc, "t_transport_s", path);
    if (doc.contains("t_hoist_s")) sf.t_hoist = require_number(doc, "t_hoist_s", path);
    if (doc.contains("model")) {
        sf.model = doc["model"].get<std::string>();
        if (sf.model != "exact" && sf.model != "harmonic" && sf.model != "coupled")
            scenario_error(path, "model must be 'exact', 'harmonic' or 'coupled'");
    }
    sf.theta0 = deg_to_rad(optional_number(doc, "theta0_deg", 0.0, path));
    sf.thetadot0 = deg_to_rad(optional_number(doc, "thetadot0_degps", 0.0, path));
    sf.grid_points = static_cast<int>(optional_number(doc, "grid_points", sf.grid_points, path));
    if (sf.grid_points < 2) scenario_error(path, "grid_points must be at least 2");
    sf.rel_tol = optional_number(doc, "rel_tol", sf.rel_tol, path);
    sf.abs_tol = optional_number(doc, "abs_tol", sf.abs_tol, path);
    if (doc.contains("seed")) {
        if (!doc["seed"].is_number_unsigned()) scenario_error(path, "seed must be unsigned");
        sf.seed = doc["seed"].get<std::uint64_t>();
    }
    if (doc.contains("alpha_extras"))
        sf.alpha_extras = number_list(doc["alpha_extras"], "alpha_extras", path);

    sf.constraints = ConstraintSet::defaults_for(sf.spec);
    if (doc.contains("constraints")) {
        sf.constraints_given = true;
        const auto& c = doc["constraints"];
        if (!c.is_object()) scenario_error(path, "constraints must be an object");
        reject_unknown_keys(
            c, {"theta_bound_deg", "x_min_m", "x_max_m", "l_min_m", "l_max_m", "v_ub_mps",
                "a_ub_mps2"},
            path, "constraints");
        sf.constraints.theta_bound =
            deg_to_rad(optional_number(c, "theta_bound_deg", 10.0, path));
        sf.constraints.x_min = optional_number(c, "x_min_m", sf.constraints.x_min, path);
        sf.constraints.x_max = optional_number(c, "x_max_m", sf.constraints.x_max, path);
        sf.constraints.l_min = optional_number(c, "l_min_m", sf.constraints.l_min, path);
        sf.constraints.l_max = optional_number(c, "l_max_m", sf.constraints.l_max, path);
        if (c.contains("v_ub_mps")) sf.constraints.v_ub = require_number(c, "v_ub_mps", path);
        if (c.contains("a_ub_mps2")) sf.constraints.a_ub = require_number(c, "a_ub_mps2", path);
    }

    if (doc.contains("sweep")) {
        const auto& s = doc["sweep"];
        if (!s.is_object()) scenario_error(path, "sweep must be an object");
        reject_unknown_keys(
            s, {"theta0_deg", "tf_s", "both_directions", "include_adiabatic", "include_ensemble"},
            path, "sweep");
        SweepConfig sweep;
        if (s.contains("theta0_deg"))
            for (double deg : number_list(s["theta0_deg"], "theta0_deg", path))
                sweep.theta0.push_back(deg_to_rad(deg));
        if (s.contains("tf_s")) sweep.tf = number_list(s["tf_s"], "tf_s", path);
        if (s.contains("both_directions")) sweep.both_directions = s["both_directions"].get<bool>();
        if (s.contains("include_adiabatic"))
            sweep.include_adiabatic = s["include_adiabatic"].get<bool>();
        if (s.contains("include_ensemble"))
            sweep.include_ensemble = s["include_ensemble"].get<bool>();
        sf.sweep = sweep;
    }

    if (doc.contains("cases")) {
        const auto& cases = doc["cases"];
        if (!cases.is_array()) scenario_error(path, "cases must be an array");
        for (const auto& c : cases) {
            if (!c.is_object()) scenario_error(path, "each case must be an object");
            reject_unknown_keys(c, {"d_m", "l0_m", "lf_m"}, path, "cases");
            MinTimeCase mc;
            mc.d = require_number(c, "d_m", path);
            mc.l0 = require_number(c, "l0_m", path);
            mc.lf = require_number(c, "lf_m", path);
            sf.cases.push_back(mc);
        }
    }

    try {
        sf.spec.validate();
        sf.constraints.validate();
    } catch (const InvalidInput& err) {
        scenario_error(path, err.what());
    }
    return sf;
}

// ---- summaries ----------------------------------------------------------------

namespace {

ordered_json scenario_json(const ScenarioSpec& spec) {
    return ordered_json{{"l0_m", spec.l0},
                        {"lf_m", spec.lf},
                        {"d_m", spec.d},
                        {"tf_s", spec.tf},
                        {"g_mps2", spec.g},
                        {"m_load_kg", spec.m_load},
                        {"M_trolley_kg", spec.M_trolley},
                        {"friction_kgps", spec.friction}};
}

ordered_json profile_json(const PolynomialProfile& profile) {
    return ordered_json{{"coefficients", profile.coefficients()},
                        {"tf_s", profile.duration()},
                        {"unit", to_string(profile.unit())}};
}

}  // namespace

std::string design_summary_json(const ScenarioFile& scenario, const DesignedProtocol& protocol) {
    ordered_json j;
    j["schema_version"] = 1;
    j["tool"] = "sway";
    j["toolkit_version"] = kVersion;
    j["kind"] = "design";
    j["scenario"] = scenario_json(scenario.spec);
    j["mode"] = scenario.mode;
    j["design"] = ordered_json{
        {"a6", protocol.params.a6},
        {"a7", protocol.params.a7},
        {"b6", protocol.params.b6},
        {"b7", protocol.params.b7},
        {"extras", protocol.params.extras},
        {"converged", protocol.report.converged},
        {"iterations", protocol.report.iterations},
        {"seed", { protocol.report.seed_a6, protocol.report.seed_a7 }},
        {"residuals",
         ordered_json{{"rope_length_m", protocol.report.rope_length_residual},
                      {"rope_velocity_mps", protocol.report.rope_velocity_residual},
                      {"trolley_position_m", protocol.report.trolley_position_residual},
                      {"trolley_velocity_mps", protocol.report.trolley_velocity_residual}}}};
    j["profiles"] = ordered_json{{"scaling", profile_json(protocol.scaling)},
                                 {"transport", profile_json(protocol.transport)}};
    j["grid_points"] = scenario.grid_points;
    return j.dump(2) + "\n";
}

std::string simulation_summary_json(const SimulationResult& result, double omega0, double omegaf,
                                    double theta0, double thetadot0) {
    const double e_ad = result.E0 * omegaf / omega0;
    ordered_json j;
    j["schema_version"] = 1;
    j["tool"] = "sway";
    j["toolkit_version"] = kVersion;
    j["kind"] = "simulation";
    j["model"] = result.model == SimulationModel::exact
                     ? "exact"
                     : (result.model == SimulationModel::harmonic ? "harmonic" : "coupled");
    j["theta0_rad"] = theta0;
    j["thetadot0_radps"] = thetadot0;
    j["E0_J"] = result.E0;
    j["Ef_J"] = result.Ef;
    j["adiabatic_energy_J"] = e_ad;
    j["ratios"] = ordered_json{
        {"final_to_initial", result.E0 != 0.0 ? result.Ef / result.E0 : 0.0},
        {"final_to_adiabatic", e_ad != 0.0 ? result.Ef / e_ad : 0.0}};
    if (std::isnan(result.theta_max_final))
        j["theta_max_final_rad"] = nullptr;
    else
        j["theta_max_final_rad"] = result.theta_max_final;
    j["over_the_top"] = result.over_the_top;
    j["exceeded_half_pi"] = result.exceeded_half_pi;
    return j.dump(2) + "\n";
}

std::string ensemble_summary_json(const EnsembleSummary& summary, const MonteCarloResult* mc) {
    ordered_json j;
    j["schema_version"] = 1;
    j["tool"] = "sway";
    j["toolkit_version"] = kVersion;
    j["kind"] = "ensemble";
    j["E0_J"] = summary.E0;
    j["mean_final_energy_J"] = summary.mean_final_energy;
    j["variance_J2"] = summary.variance;
    j["adiabatic_energy_J"] = summary.adiabatic_energy;
    j["alpha_bar"] = summary.alpha_bar;
    j["beta_bar"] = summary.beta_bar;
    j["eta_bar"] = summary.eta_bar;
    j["forced_energy_shift_J"] = summary.forced_energy_shift;
    if (mc != nullptr) {
        j["monte_carlo"] = ordered_json{{"samples", mc->final_energy.size()},
                                        {"mean_J", mc->mean},
                                        {"variance_J2", mc->variance},
                                        {"std_error_J", mc->std_error()}};
    }
    return j.dump(2) + "\n";
}

}  // namespace sway::io
