#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>

#include "chemfront/analysis.hpp"
#include "chemfront/config.hpp"
#include "chemfront/run_record.hpp"

namespace chemfront::harness {

struct TheoryRequest {
    Params params;
    double eps = 0.5;
    double eta = 0.1;
    double big_m = 10.0;
};

/// Full constant report plus the eigenpair residual self-test.
ordered_json theory_report(const TheoryRequest& req);

/// Monitor data accumulated at every cadence sample, either live during a
/// run or offline from snapshot files; the verification report is a pure
/// function of this plus the config.
struct MonitorSeries {
    std::vector<double> times;
    std::vector<double> interior_u, interior_v;
    std::vector<double> exterior_u, exterior_v;
    std::vector<double> residual_max;  // per sampled step pair, first pair skipped
    BallSignal ball;
    double envelope_viol_u = -std::numeric_limits<double>::max();
    double envelope_viol_v = -std::numeric_limits<double>::max();
    double dt_max = 0.0;
};

/// Everything one run produces; out_dir may be empty to skip artifacts.
struct RunOutcome {
    RunRecord record;
    MonitorSeries series;
    ordered_json record_json;
    ordered_json verification;
    double fitted_speed = std::numeric_limits<double>::quiet_NaN();
    double residual_max = std::numeric_limits<double>::quiet_NaN();
    bool verification_pass = false;
};

RunOutcome execute_run(const RunConfig& cfg, const std::string& out_dir, std::uint64_t seed);

/// Recompute all monitors offline from the artifacts in run_dir and write
/// verify_report.json there. Byte-identical across invocations.
ordered_json verify_run(const std::string& run_dir);

// CLI entry points. Exit codes: 0 ok, 2 config/artifact error, 3 numerical
// failure.
int cmd_run(const std::string& config_path, const std::string& out_dir, std::uint64_t seed,
            std::ostream& log);
int cmd_sweep(const std::string& config_path, const std::string& out_dir, int jobs,
              std::uint64_t seed, std::ostream& log);
int cmd_theory(const TheoryRequest& req, const std::string& out_file, std::ostream& os);
int cmd_verify(const std::string& run_dir, std::ostream& os);

}  // namespace chemfront::harness
