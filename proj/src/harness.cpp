#include "chemfront/harness.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <thread>

#include "chemfront/field_ops.hpp"
#include "chemfront/snapshot_io.hpp"
#include "chemfront/solver.hpp"
#include "chemfront/text_io.hpp"
#include "chemfront/theory.hpp"

namespace chemfront::harness {

namespace fs = std::filesystem;
namespace th = chemfront::theory;

namespace {

void write_text(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
}

std::string snap_name(const char* tag, std::size_t k) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%s_%06zu.bin", tag, k);
    return buf;
}

RegionShape shape_for(InitialDataKind kind) {
    switch (kind) {
        case InitialDataKind::FrontLike: return RegionShape::HalfSpace;
        case InitialDataKind::TwoSided: return RegionShape::Slab;
        default: return RegionShape::Ball;
    }
}

std::string to_string(RegionShape s) {
    switch (s) {
        case RegionShape::Ball: return "ball";
        case RegionShape::HalfSpace: return "halfspace";
        case RegionShape::Slab: return "slab";
    }
    return "?";
}

RegionShape shape_from_string(const std::string& s) {
    if (s == "ball") return RegionShape::Ball;
    if (s == "halfspace") return RegionShape::HalfSpace;
    if (s == "slab") return RegionShape::Slab;
    throw config_error("unknown region shape: " + s);
}

struct MonitorSetup {
    bool regions = false;
    double cone_in = 0.0, cone_out = 0.0;
    RegionShape shape = RegionShape::Ball;
    std::array<double, 3> xi{1, 0, 0};
    double trusted_radius = 0.0;
    bool residual = false;
    bool envelope = false;
    EnvelopeParams env;
    bool persistence = false;
    double eta = 0.0;
    double ball_radius = 0.0;
    double burn_in = 0.0;
    double big_m = 0.0;
};

MonitorSetup make_setup(const RunConfig& cfg, const State& initial) {
    MonitorSetup ms;
    const Params& p = cfg.params;
    ms.xi = cfg.initial.direction;
    ms.shape = shape_for(cfg.initial.kind);
    ms.regions = cfg.monitors.regions;
    const double root_a = std::sqrt(p.a);
    ms.cone_in = 2.0 * root_a - cfg.monitors.eps;
    ms.cone_out = 2.0 * root_a + cfg.monitors.eps;
    ms.trusted_radius = std::numeric_limits<double>::max();
    for (int a = 0; a < cfg.grid.dim; ++a) {
        const double margin = cfg.clearance_fraction * (cfg.grid.hi[a] - cfg.grid.lo[a]);
        ms.trusted_radius = std::min(ms.trusted_radius, cfg.grid.hi[a] - margin);
    }
    ms.residual = cfg.monitors.residual;
    if (cfg.monitors.envelope) {
        ms.envelope = true;
        const bool two_sided = cfg.initial.kind == InitialDataKind::TwoSided;
        if (cfg.monitors.envelope_m > 0.0) {
            ms.env.k = cfg.monitors.envelope_k;
            ms.env.xi = ms.xi;
            ms.env.two_sided = two_sided;
            ms.env.amplitude_u = cfg.monitors.envelope_m;
            ms.env.amplitude_v = th::envelope_v_amplitude(cfg.monitors.envelope_m, p.a, p.mu,
                                                          p.lambda);
            const EnvelopeViolation v0 = envelope_violation(initial, p, ms.env);
            if (v0.u > 0.0 || v0.v > 0.0) {
                const std::size_t arg = v0.u > 0.0 ? v0.u_arg : v0.v_arg;
                throw config_error(
                    "config error: initial data violates the envelope precondition at index " +
                    std::to_string(arg));
            }
        } else {
            ms.env = fit_envelope(initial, p, cfg.monitors.envelope_k, ms.xi, two_sided);
        }
    }
    if (cfg.monitors.persistence) {
        ms.persistence = true;
        ms.eta = cfg.monitors.persistence_eta_rel * (p.a / p.b);
        ms.burn_in = cfg.monitors.persistence_burn_in;
        double big_m = cfg.monitors.persistence_big_m;
        if (big_m <= 0.0) {
            big_m = std::max({initial.u.max(), initial.v.max(), max_grad_norm(initial.v),
                              p.a / p.b, p.mu * p.a / (p.lambda * p.b)});
        }
        ms.big_m = big_m;
        const double T = th::persistence_time(ms.eta, big_m, p.lambda);
        const double ell = th::eigen_box_halfwidth(cfg.monitors.eps, p.a, p.dim);
        ms.ball_radius = 2.0 * th::persistence_radius(ms.eta, T, p.a, p.dim, ell);
    }
    return ms;
}

ordered_json setup_to_json(const MonitorSetup& ms, int dim) {
    ordered_json j;
    j["regions"] = ms.regions;
    j["cone_in"] = ms.cone_in;
    j["cone_out"] = ms.cone_out;
    j["shape"] = to_string(ms.shape);
    j["xi"] = std::vector<double>(ms.xi.begin(), ms.xi.begin() + dim);
    j["trusted_radius"] = ms.trusted_radius;
    j["residual"] = ms.residual;
    j["envelope"] = ms.envelope;
    if (ms.envelope) {
        j["envelope_k"] = ms.env.k;
        j["envelope_m"] = ms.env.amplitude_u;
        j["envelope_d"] = ms.env.amplitude_v;
        j["envelope_two_sided"] = ms.env.two_sided;
    }
    j["persistence"] = ms.persistence;
    if (ms.persistence) {
        j["persistence_eta"] = ms.eta;
        j["persistence_radius"] = ms.ball_radius;
        j["persistence_burn_in"] = ms.burn_in;
        j["persistence_big_m"] = ms.big_m;
    }
    return j;
}

MonitorSetup setup_from_json(const ordered_json& j) {
    MonitorSetup ms;
    ms.regions = j.at("regions").get<bool>();
    ms.cone_in = j.at("cone_in").get<double>();
    ms.cone_out = j.at("cone_out").get<double>();
    ms.shape = shape_from_string(j.at("shape").get<std::string>());
    const auto xi = j.at("xi").get<std::vector<double>>();
    for (std::size_t a = 0; a < xi.size() && a < 3; ++a) ms.xi[a] = xi[a];
    ms.trusted_radius = j.at("trusted_radius").get<double>();
    ms.residual = j.at("residual").get<bool>();
    ms.envelope = j.at("envelope").get<bool>();
    if (ms.envelope) {
        ms.env.k = j.at("envelope_k").get<double>();
        ms.env.amplitude_u = j.at("envelope_m").get<double>();
        ms.env.amplitude_v = j.at("envelope_d").get<double>();
        ms.env.two_sided = j.at("envelope_two_sided").get<bool>();
        ms.env.xi = ms.xi;
    }
    ms.persistence = j.at("persistence").get<bool>();
    if (ms.persistence) {
        ms.eta = j.at("persistence_eta").get<double>();
        ms.ball_radius = j.at("persistence_radius").get<double>();
        ms.burn_in = j.at("persistence_burn_in").get<double>();
        ms.big_m = j.at("persistence_big_m").get<double>();
    }
    return ms;
}

// One observer sample shared by the live run and offline verification.
void accumulate(MonitorSeries& series, const MonitorSetup& ms, const Params& p,
                std::size_t sample_index, const State& at, const State* next) {
    series.times.push_back(at.t);
    if (ms.regions) {
        const RegionReport ri = interior_infimum(at, ms.cone_in, ms.shape, ms.xi);
        series.interior_u.push_back(ri.u);
        series.interior_v.push_back(ri.v);
        const RegionReport re =
            exterior_supremum(at, ms.cone_out, ms.shape, ms.xi, ms.trusted_radius);
        series.exterior_u.push_back(re.u);
        series.exterior_v.push_back(re.v);
    }
    if (ms.persistence) {
        const auto [lo, hi] = ball_extremes(at.u, ms.ball_radius);
        series.ball.radius = ms.ball_radius;
        series.ball.times.push_back(at.t);
        series.ball.inf_u.push_back(lo);
        series.ball.sup_u.push_back(hi);
    }
    if (ms.envelope) {
        const EnvelopeViolation ev = envelope_violation(at, p, ms.env);
        series.envelope_viol_u = std::max(series.envelope_viol_u, ev.u);
        series.envelope_viol_v = std::max(series.envelope_viol_v, ev.v);
    }
    // the first pair straddles the initial-data transient; residual
    // monitoring starts at the second cadence sample
    if (ms.residual && next != nullptr && sample_index > 0) {
        const Field r = supersolution_residual(at, *next, p);
        series.residual_max.push_back(r.max());
    }
    if (next != nullptr) series.dt_max = std::max(series.dt_max, next->t - at.t);
}

ordered_json clause(const std::string& name, bool pass, double measured, double tolerance,
                    const std::string& note = "") {
    ordered_json c;
    c["name"] = name;
    c["pass"] = pass;
    if (std::isfinite(measured)) c["measured"] = measured;
    if (std::isfinite(tolerance)) c["tolerance"] = tolerance;
    if (!note.empty()) c["note"] = note;
    return c;
}

ordered_json build_verification(const RunConfig& cfg, const MonitorSetup& ms,
                                const MonitorSeries& series, bool completed, bool clearance_ok) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    ordered_json clauses = ordered_json::array();
    clauses.push_back(clause("completed", completed, nan, nan,
                             completed ? "" : "run terminated early"));
    clauses.push_back(clause("clearance", clearance_ok, nan, nan,
                             clearance_ok ? "" : "front reached the boundary margin"));

    const double tau =
        3.0 * cfg.monitors.residual_coeff *
        (cfg.grid.min_dx() * cfg.grid.min_dx() + series.dt_max);

    if (ms.regions && !series.times.empty()) {
        // positivity floor over the trailing half of the horizon
        const double t_win = series.times.front() + 0.5 * cfg.horizon;
        double iu = std::numeric_limits<double>::max(), iv = iu;
        for (std::size_t i = 0; i < series.times.size(); ++i) {
            if (series.times[i] < t_win) continue;
            iu = std::min(iu, series.interior_u[i]);
            iv = std::min(iv, series.interior_v[i]);
        }
        clauses.push_back(clause("interior_u_floor", iu >= cfg.monitors.interior_floor, iu,
                                 cfg.monitors.interior_floor));
        clauses.push_back(clause("interior_v_floor", iv >= cfg.monitors.interior_floor, iv,
                                 cfg.monitors.interior_floor));
        const double eu = series.exterior_u.back();
        const double ev = series.exterior_v.back();
        clauses.push_back(clause("exterior_u_decay", eu <= cfg.monitors.exterior_ceiling, eu,
                                 cfg.monitors.exterior_ceiling));
        clauses.push_back(clause("exterior_v_decay", ev <= cfg.monitors.exterior_ceiling, ev,
                                 cfg.monitors.exterior_ceiling));
    }
    if (ms.residual) {
        double rmax = -std::numeric_limits<double>::max();
        for (double r : series.residual_max) rmax = std::max(rmax, r);
        const bool have = !series.residual_max.empty();
        clauses.push_back(clause("w_residual", have && rmax <= tau,
                                 have ? rmax : nan, tau));
    }
    if (ms.envelope) {
        clauses.push_back(
            clause("envelope_u", series.envelope_viol_u <= tau, series.envelope_viol_u, tau));
        clauses.push_back(
            clause("envelope_v", series.envelope_viol_v <= tau, series.envelope_viol_v, tau));
    }
    if (ms.persistence) {
        const PersistenceReport pr = persistence_check(series.ball, ms.eta, ms.burn_in);
        const bool pass = pr.established && pr.delta_meas > cfg.monitors.persistence_floor &&
                          pr.never_below_half;
        ordered_json c = clause("persistence", pass, pr.delta_meas,
                                cfg.monitors.persistence_floor);
        c["triggered"] = pr.triggered;
        c["trigger_time"] = pr.trigger_time;
        c["established"] = pr.established;
        c["established_time"] = pr.established_time;
        c["window_start"] = pr.window_start;
        c["never_below_half"] = pr.never_below_half;
        c["ball_radius"] = ms.ball_radius;
        c["eta"] = ms.eta;
        clauses.push_back(c);
    }

    bool overall = true;
    for (const auto& c : clauses) overall = overall && c.at("pass").get<bool>();
    ordered_json report;
    report["clauses"] = clauses;
    report["overall"] = overall;
    return report;
}

ordered_json grid_to_json(const Grid& g) {
    ordered_json j;
    j["dim"] = g.dim;
    j["lo"] = std::vector<double>(g.lo.begin(), g.lo.begin() + g.dim);
    j["hi"] = std::vector<double>(g.hi.begin(), g.hi.begin() + g.dim);
    j["n"] = std::vector<int>(g.n.begin(), g.n.begin() + g.dim);
    j["boundary"] = to_string(g.boundary);
    std::vector<double> dx;
    for (int a = 0; a < g.dim; ++a) dx.push_back(g.dx(a));
    j["dx"] = dx;
    return j;
}

std::string fronts_csv(const std::vector<FrontTrace>& traces) {
    std::string out = "t,threshold,direction,position,trusted\n";
    for (const auto& tr : traces) {
        for (std::size_t i = 0; i < tr.times.size(); ++i) {
            out += csv_row({format_double(tr.times[i]), format_double(tr.threshold),
                            tr.direction, format_double(tr.positions[i]),
                            tr.trusted[i] ? "true" : "false"});
        }
    }
    return out;
}

}  // namespace

RunOutcome execute_run(const RunConfig& cfg, const std::string& out_dir, std::uint64_t seed) {
    cfg.validate();
    State initial = build_initial(cfg.initial, cfg.grid, cfg.clearance_fraction);
    const MonitorSetup ms = make_setup(cfg, initial);

    const bool writing = !out_dir.empty();
    fs::path dir(out_dir);
    fs::path snapdir = dir / "snapshots";
    if (writing) {
        fs::create_directories(dir);
        if (cfg.output.snapshots) fs::create_directories(snapdir);
        write_text(dir / "config.json", to_json(cfg).dump(2) + "\n");
    }

    RunOutcome out;
    MonitorSeries& series = out.series;
    ordered_json snapshot_index = ordered_json::array();

    ObserverConfig obs;
    obs.cadence = cfg.cadence;
    obs.thresholds = cfg.absolute_thresholds();
    obs.clearance_fraction = cfg.clearance_fraction;

    const SampleHook hook = [&](std::size_t k, const SamplePair& sp) {
        accumulate(series, ms, cfg.params, k, *sp.at, sp.next);
        if (writing && cfg.output.snapshots) {
            write_field((snapdir / snap_name("u", k)).string(), sp.at->u, sp.at->t);
            write_field((snapdir / snap_name("v", k)).string(), sp.at->v, sp.at->t);
            if (sp.next != nullptr) {
                write_field((snapdir / snap_name("un", k)).string(), sp.next->u, sp.next->t);
                write_field((snapdir / snap_name("vn", k)).string(), sp.next->v, sp.next->t);
            }
            ordered_json e;
            e["k"] = k;
            e["t"] = sp.at->t;
            e["dt"] = sp.dt;
            e["has_next"] = sp.next != nullptr;
            snapshot_index.push_back(e);
        }
    };

    out.record = run(std::move(initial), cfg.params, cfg.scheme, cfg.horizon, obs, hook);
    out.record.seed = seed;
    const bool completed = out.record.termination.reason == Termination::Reason::Completed;
    const bool clearance_ok = !out.record.clearance_violated_at.has_value();
    out.verification = build_verification(cfg, ms, series, completed, clearance_ok);
    out.verification_pass = out.verification.at("overall").get<bool>();

    // default-threshold speed fit
    ordered_json fits = ordered_json::array();
    const double theta_default = 0.5 * cfg.params.a / cfg.params.b;
    for (const auto& tr : out.record.traces) {
        try {
            const SpeedFit f = fit_speed(tr, 0.5);
            ordered_json fj;
            fj["threshold"] = tr.threshold;
            fj["direction"] = tr.direction;
            fj["speed"] = f.speed;
            fj["intercept"] = f.intercept;
            fj["residual_rms"] = f.residual_rms;
            fj["t_begin"] = f.t_begin;
            fj["t_end"] = f.t_end;
            fj["count"] = f.count;
            fits.push_back(fj);
            const bool preferred = tr.direction == (cfg.grid.dim == 1 ? "+e0" : "radial");
            if (preferred && std::abs(tr.threshold - theta_default) < 1e-9)
                out.fitted_speed = f.speed;
        } catch (const std::invalid_argument&) {
            // not enough samples for this trace; skip
        }
    }
    if (!series.residual_max.empty()) {
        double rmax = -std::numeric_limits<double>::max();
        for (double r : series.residual_max) rmax = std::max(rmax, r);
        out.residual_max = rmax;
    }

    // run record json
    const ordered_json cfg_json = to_json(cfg);
    ordered_json rec;
    rec["params"] = cfg_json.at("params");
    rec["grid"] = grid_to_json(out.record.grid);
    rec["scheme"] = cfg_json.at("scheme");
    rec["horizon"] = cfg.horizon;
    rec["seed"] = seed;
    rec["steps"] = out.record.steps;
    rec["dt_max"] = series.dt_max;
    rec["clip_count"] = out.record.clip_count;
    rec["max_cfl_advective"] = out.record.max_cfl_advective;
    rec["max_cfl_chemotactic"] = out.record.max_cfl_chemotactic;
    rec["clearance_margin"] = out.record.clearance_margin;
    if (out.record.clearance_violated_at)
        rec["clearance_violated_at"] = *out.record.clearance_violated_at;
    else
        rec["clearance_violated_at"] = nullptr;
    ordered_json term;
    term["reason"] = completed ? "completed" : "numerical_failure";
    term["t"] = out.record.termination.t;
    term["message"] = out.record.termination.message;
    rec["termination"] = term;
    ordered_json stats = ordered_json::array();
    for (const auto& s : out.record.snapshots) {
        ordered_json sj;
        sj["t"] = s.t;
        sj["u_min"] = s.u_min;
        sj["u_max"] = s.u_max;
        sj["v_min"] = s.v_min;
        sj["v_max"] = s.v_max;
        sj["u_mass"] = s.u_mass;
        sj["max_grad_v"] = s.max_grad_v;
        stats.push_back(sj);
    }
    rec["snapshots"] = stats;
    rec["fits"] = fits;
    rec["monitor_setup"] = setup_to_json(ms, cfg.grid.dim);
    rec["snapshot_index"] = snapshot_index;
    out.record_json = rec;

    if (writing) {
        write_text(dir / "run_record.json", rec.dump(2) + "\n");
        if (cfg.output.fronts) write_text(dir / "fronts.csv", fronts_csv(out.record.traces));
        write_text(dir / "verification_report.json", out.verification.dump(2) + "\n");
    }
    return out;
}

ordered_json verify_run(const std::string& run_dir) {
    const fs::path dir(run_dir);
    const RunConfig cfg = parse_run_config(read_json_file((dir / "config.json").string()));
    const ordered_json rec = read_json_file((dir / "run_record.json").string());
    const MonitorSetup ms = setup_from_json(rec.at("monitor_setup"));

    MonitorSeries series;
    const auto& index = rec.at("snapshot_index");
    if (index.empty())
        throw std::runtime_error("verify: run has no snapshots (output.snapshots was off?)");
    for (const auto& e : index) {
        const auto k = e.at("k").get<std::size_t>();
        auto [u, tu] = read_field((dir / "snapshots" / snap_name("u", k)).string());
        auto [v, tv] = read_field((dir / "snapshots" / snap_name("v", k)).string());
        if (std::abs(tu - tv) > 1e-12) throw std::runtime_error("verify: snapshot time mismatch");
        State at;
        at.u = std::move(u);
        at.v = std::move(v);
        at.t = tu;
        if (e.at("has_next").get<bool>()) {
            auto [un, tun] = read_field((dir / "snapshots" / snap_name("un", k)).string());
            auto [vn, tvn] = read_field((dir / "snapshots" / snap_name("vn", k)).string());
            if (std::abs(tun - tvn) > 1e-12)
                throw std::runtime_error("verify: snapshot time mismatch");
            State next;
            next.u = std::move(un);
            next.v = std::move(vn);
            next.t = tun;
            accumulate(series, ms, cfg.params, k, at, &next);
        } else {
            accumulate(series, ms, cfg.params, k, at, nullptr);
        }
    }
    const bool completed = rec.at("termination").at("reason").get<std::string>() == "completed";
    const bool clearance_ok = rec.at("clearance_violated_at").is_null();
    ordered_json report = build_verification(cfg, ms, series, completed, clearance_ok);
    write_text(dir / "verify_report.json", report.dump(2) + "\n");
    return report;
}

int cmd_run(const std::string& config_path, const std::string& out_dir, std::uint64_t seed,
            std::ostream& log) {
    RunConfig cfg;
    try {
        cfg = load_run_config(config_path);
    } catch (const config_error& e) {
        log << e.what() << "\n";
        return 2;
    }
    RunOutcome out;
    try {
        out = execute_run(cfg, out_dir, seed);
    } catch (const config_error& e) {
        log << e.what() << "\n";
        return 2;
    }
    for (const auto& c : out.verification.at("clauses")) {
        log << (c.at("pass").get<bool>() ? "[PASS] " : "[FAIL] ") << c.at("name").get<std::string>();
        if (c.contains("measured")) log << " measured=" << c.at("measured").dump();
        if (c.contains("tolerance")) log << " tolerance=" << c.at("tolerance").dump();
        log << "\n";
    }
    if (std::isfinite(out.fitted_speed)) log << "fitted speed: " << out.fitted_speed << "\n";
    if (out.record.termination.reason != Termination::Reason::Completed) {
        log << "numerical failure at t=" << out.record.termination.t << ": "
            << out.record.termination.message << "\n";
        return 3;
    }
    return 0;
}

int cmd_verify(const std::string& run_dir, std::ostream& os) {
    ordered_json report;
    try {
        report = verify_run(run_dir);
    } catch (const std::exception& e) {
        os << "verify error: " << e.what() << "\n";
        return 2;
    }
    os << report.dump(2) << "\n";
    return 0;
}

namespace {

void set_by_path(ordered_json& j, const std::string& dotted, const ordered_json& value) {
    ordered_json* cur = &j;
    std::size_t pos = 0;
    while (true) {
        const auto dot = dotted.find('.', pos);
        const std::string key = dotted.substr(pos, dot - pos);
        if (dot == std::string::npos) {
            (*cur)[key] = value;
            return;
        }
        cur = &((*cur)[key]);
        pos = dot + 1;
    }
}

struct SweepPoint {
    std::size_t index = 0;
    ordered_json config;
};

std::string sanitize_csv(std::string s) {
    for (char& c : s) {
        if (c == ',' || c == '\n') c = ';';
    }
    return s;
}

std::string sweep_row(std::size_t index, const RunConfig& cfg, const RunOutcome* out,
                      const std::string& error) {
    const Params& p = cfg.params;
    std::vector<std::string> cells{
        std::to_string(index),     format_double(p.chi),    format_double(p.a),
        format_double(p.b),        format_double(p.lambda), format_double(p.mu),
        std::to_string(p.dim),     damping_condition(p) ? "true" : "false"};
    if (out != nullptr && out->record.termination.reason == Termination::Reason::Completed) {
        const double kpp = 2.0 * std::sqrt(p.a);
        const double rel =
            std::isfinite(out->fitted_speed) ? (out->fitted_speed - kpp) / kpp
                                             : std::numeric_limits<double>::quiet_NaN();
        cells.push_back(format_double(out->fitted_speed));
        cells.push_back(format_double(rel));
        cells.push_back(format_double(out->residual_max));
        if (!damping_condition(p)) {
            cells.push_back("n/a");  // no prediction outside the damping regime
        } else {
            const bool residual_ok =
                !cfg.monitors.residual ||
                (std::isfinite(out->residual_max) &&
                 out->residual_max <= 3.0 * cfg.monitors.residual_coeff *
                                          (cfg.grid.min_dx() * cfg.grid.min_dx() +
                                           out->series.dt_max));
            const bool ok = std::isfinite(rel) && std::abs(rel) <= 0.05 && residual_ok;
            cells.push_back(ok ? "yes" : "no");
        }
        cells.push_back("");
    } else {
        cells.push_back("nan");
        cells.push_back("nan");
        cells.push_back("nan");
        cells.push_back("no");
        cells.push_back(sanitize_csv(error));
    }
    return csv_row(cells);
}

}  // namespace

int cmd_sweep(const std::string& config_path, const std::string& out_dir, int jobs,
              std::uint64_t seed, std::ostream& log) {
    ordered_json root;
    ordered_json base;
    std::vector<std::pair<std::string, ordered_json>> axes;
    std::string csv_name = "sweep.csv";
    try {
        root = read_json_file(config_path);
        if (!root.is_object() || !root.contains("base"))
            throw config_error("config error: sweep file needs a \"base\" object");
        for (auto it = root.begin(); it != root.end(); ++it) {
            if (it.key() == "base" || it.key() == "sweep" || it.key() == "csv") continue;
            throw config_error("config error: unknown key " + it.key());
        }
        base = root.at("base");
        apply_env_overrides(base);
        if (root.contains("csv")) csv_name = root.at("csv").get<std::string>();
        if (root.contains("sweep")) {
            const auto& sw = root.at("sweep");
            if (!sw.is_object()) throw config_error("config error: sweep must be an object");
            for (auto it = sw.begin(); it != sw.end(); ++it) {
                if (!it.value().is_array() || it.value().empty())
                    throw config_error("config error: sweep." + it.key() +
                                       " must be a nonempty array");
                axes.emplace_back(it.key(), it.value());
            }
        }
        parse_run_config(base);  // fail fast on a broken base
    } catch (const config_error& e) {
        log << e.what() << "\n";
        return 2;
    }

    // cartesian product, first axis slowest
    std::vector<SweepPoint> points;
    std::size_t total = 1;
    for (const auto& [k, vals] : axes) total *= vals.size();
    for (std::size_t i = 0; i < total; ++i) {
        SweepPoint pt;
        pt.index = i;
        pt.config = base;
        std::size_t rest = i;
        for (std::size_t a = axes.size(); a-- > 0;) {
            const auto& [key, vals] = axes[a];
            set_by_path(pt.config, key, vals[rest % vals.size()]);
            rest /= vals.size();
        }
        points.push_back(std::move(pt));
    }

    std::vector<std::string> rows(points.size());
    std::atomic<std::size_t> cursor{0};
    const int nworkers = std::max(1, jobs);
    auto worker = [&]() {
        while (true) {
            const std::size_t i = cursor.fetch_add(1);
            if (i >= points.size()) return;
            RunConfig cfg;
            try {
                cfg = parse_run_config(points[i].config);
                RunOutcome out = execute_run(cfg, "", seed);
                const std::string err = out.record.termination.message;
                rows[i] = sweep_row(i, cfg, &out, err);
            } catch (const std::exception& e) {
                try {
                    cfg = parse_run_config(points[i].config);
                } catch (...) {
                    cfg = RunConfig{};
                }
                rows[i] = sweep_row(i, cfg, nullptr, e.what());
            }
        }
    };
    std::vector<std::thread> threads;
    for (int w = 0; w < nworkers; ++w) threads.emplace_back(worker);
    for (auto& t : threads) t.join();

    std::string csv =
        "index,chi,a,b,lambda,mu,dim,damping_ok,speed,speed_rel_err,residual_max,pass,error\n";
    for (const auto& r : rows) csv += r;
    fs::create_directories(out_dir);
    write_text(fs::path(out_dir) / csv_name, csv);
    log << "sweep: " << points.size() << " points -> " << (fs::path(out_dir) / csv_name).string()
        << "\n";
    return 0;
}

ordered_json theory_report(const TheoryRequest& req) {
    const Params& p = req.params;
    th::TheoryBundle tb(p, req.eps);
    ordered_json j;
    j["params"] = {{"a", p.a},     {"b", p.b},   {"chi", p.chi},
                   {"lambda", p.lambda}, {"mu", p.mu}, {"dim", p.dim}};
    j["eps"] = req.eps;
    j["kpp_speed"] = tb.kpp;
    j["abar"] = tb.abar;
    j["ell"] = tb.ell;
    j["lambda_floor"] = tb.lambda_floor;
    j["lambda_at_zero"] = tb.lambda_of(0.0);

    const double cmax = tb.kpp - req.eps;
    double lmin = std::numeric_limits<double>::max();
    for (int i = 0; i <= 100; ++i) {
        const double c = -cmax + 2.0 * cmax * i / 100.0;
        lmin = std::min(lmin, tb.lambda_of(c));
    }
    j["lambda_min_on_grid"] = lmin;
    j["floor_attained"] = std::abs(tb.lambda_of(cmax) - tb.lambda_floor) <= 1e-12;

    j["eta"] = req.eta;
    j["big_m"] = req.big_m;
    j["t_of_eta"] = tb.t_of_eta(req.eta, req.big_m);
    j["l_of_eta"] = tb.l_of_eta(req.eta, req.big_m);
    j["chemical_response_bound"] = tb.response_bound(req.big_m);
    j["envelope_v_amplitude"] = tb.envelope_v(req.big_m);
    j["envelope_speed_min"] = th::envelope_speed(std::sqrt(p.a), p.a);

    // eigenpair residual self-test with central differences
    const std::array<double, 3> xi =
        p.dim == 1 ? std::array<double, 3>{1, 0, 0}
                   : (p.dim == 2 ? std::array<double, 3>{0.6, 0.8, 0.0}
                                 : std::array<double, 3>{2.0 / 3.0, 2.0 / 3.0, 1.0 / 3.0});
    const double c_test = 0.5 * cmax;
    const double lam = tb.lambda_of(c_test);
    std::vector<double> errs;
    int npts = 1;
    for (int a = 0; a < p.dim; ++a) npts *= 3;
    for (const double h : {tb.ell / 100.0, tb.ell / 200.0, tb.ell / 400.0}) {
        double worst = 0.0;
        for (int pt = 0; pt < npts; ++pt) {
            std::array<double, 3> x{0, 0, 0};
            int rest = pt;
            for (int a = 0; a < p.dim; ++a) {
                x[a] = (rest % 3 - 1) * 0.55 * tb.ell;
                rest /= 3;
            }
            const double p0 = th::principal_eigenfunction(x, xi, c_test, req.eps, p.a, p.dim);
            double lap = 0.0, drift = 0.0;
            for (int a = 0; a < p.dim; ++a) {
                std::array<double, 3> xp = x, xm = x;
                xp[a] += h;
                xm[a] -= h;
                const double pp = th::principal_eigenfunction(xp, xi, c_test, req.eps, p.a, p.dim);
                const double pm = th::principal_eigenfunction(xm, xi, c_test, req.eps, p.a, p.dim);
                lap += (pp - 2.0 * p0 + pm) / (h * h);
                drift += c_test * xi[a] * (pp - pm) / (2.0 * h);
            }
            worst = std::max(worst, std::abs(lap + drift + tb.abar * p0 - lam * p0));
        }
        errs.push_back(worst);
    }
    const double order01 = std::log2(errs[0] / errs[1]);
    const double order12 = std::log2(errs[1] / errs[2]);
    j["eigen_residuals"] = errs;
    j["eigen_orders"] = std::vector<double>{order01, order12};
    j["eigen_selftest_pass"] = order01 >= 1.9 && order12 >= 1.9;
    return j;
}

int cmd_theory(const TheoryRequest& req, const std::string& out_file, std::ostream& os) {
    ordered_json j;
    try {
        j = theory_report(req);
    } catch (const std::exception& e) {
        os << "theory error: " << e.what() << "\n";
        return 2;
    }
    os << j.dump(2) << "\n";
    if (!out_file.empty()) write_text(out_file, j.dump(2) + "\n");
    return 0;
}

}  // namespace chemfront::harness
