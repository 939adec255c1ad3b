#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "chemfront/grid.hpp"
#include "chemfront/initial_data.hpp"
#include "chemfront/params.hpp"
#include "chemfront/solver.hpp"

namespace chemfront {

using ordered_json = nlohmann::ordered_json;

struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Tolerances and switches for the built-in monitors. The floors marked
/// "empirical" are artifact choices, not derived constants.
struct MonitorConfig {
    bool regions = true;
    double eps = 0.5;                  // speed margin for interior/exterior cones
    double interior_floor = 1e-3;      // empirical positivity floor
    double exterior_ceiling = 1e-3;
    bool residual = true;
    double residual_coeff = 0.25;      // C in the tolerance 3*C*(dx^2 + dt)
    bool envelope = false;
    double envelope_k = 0.5;
    double envelope_m = 0.0;           // 0 = fit from the initial data
    bool persistence = false;
    double persistence_eta_rel = 0.1;  // eta as a fraction of a/b
    double persistence_burn_in = 5.0;
    double persistence_big_m = 0.0;    // 0 = derive from initial data and steady states
    double persistence_floor = 1e-3;   // empirical
};

struct OutputConfig {
    bool snapshots = true;
    bool fronts = true;
};

struct RunConfig {
    Params params;
    Grid grid;
    SchemeConfig scheme;
    InitialDataSpec initial;
    double horizon = 120.0;
    double cadence = 0.5;
    std::vector<double> thresholds_rel{0.5};  // fractions of a/b
    double clearance_fraction = 0.1;
    MonitorConfig monitors;
    OutputConfig output;

    std::vector<double> absolute_thresholds() const;
    void validate() const;
};

/// Strict parse: unknown keys anywhere are config errors (reported with the
/// full key path), as are missing required keys.
RunConfig parse_run_config(const ordered_json& j);

ordered_json to_json(const RunConfig& c);

/// Applies CHEMFRONT_-prefixed environment overrides (path components joined
/// by "__", e.g. CHEMFRONT_params__a=2.5) onto a raw config document.
void apply_env_overrides(ordered_json& j, const char* prefix = "CHEMFRONT_");

/// Read file -> apply env overrides -> strict parse.
RunConfig load_run_config(const std::string& path, bool with_env = true);

ordered_json read_json_file(const std::string& path);

}  // namespace chemfront
