#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "chemfront/analysis.hpp"
#include "chemfront/grid.hpp"
#include "chemfront/params.hpp"

namespace chemfront {

struct SnapshotStat {
    double t = 0.0;
    double u_min = 0.0, u_max = 0.0;
    double v_min = 0.0, v_max = 0.0;
    double u_mass = 0.0;
    double max_grad_v = 0.0;
};

struct Termination {
    enum class Reason { Completed, NumericalFailure };
    Reason reason = Reason::Completed;
    double t = 0.0;
    std::string message;
};

/// Everything one run produces in memory. Snapshot times are strictly
/// increasing; field dumps are written by the harness, not stored here.
struct RunRecord {
    Params params;
    Grid grid;
    // scheme metadata (kept as strings so the record stays self-describing)
    double dt_base = 0.0;
    std::string dt_policy;
    double safety = 0.0;
    std::string flux;
    std::string diffusion;
    double frame_speed = 0.0;

    std::vector<SnapshotStat> snapshots;
    std::vector<FrontTrace> traces;

    double horizon = 0.0;
    std::size_t steps = 0;
    double max_cfl_advective = 0.0;
    double max_cfl_chemotactic = 0.0;
    long clip_count = 0;
    double clearance_margin = 0.0;
    std::optional<double> clearance_violated_at;
    Termination termination;
    std::uint64_t seed = 0;
};

}  // namespace chemfront
