#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "chemfront/config.hpp"
#include "chemfront/harness.hpp"
#include "chemfront/initial_data.hpp"
#include "chemfront/snapshot_io.hpp"
#include "chemfront/text_io.hpp"

using namespace chemfront;
namespace fs = std::filesystem;

namespace {

ordered_json small_run_config() {
    return ordered_json::parse(R"({
      "params": {"a": 1.0, "b": 1.0, "chi": 0.5, "lambda": 1.0, "mu": 1.0, "dim": 1},
      "grid": {"lo": [-50.0], "hi": [50.0], "n": [501], "boundary": "neumann"},
      "initial": {"kind": "compact_bump", "radius": 5.0, "amplitude": 1.0, "v_amplitude": 0.5},
      "horizon": 8.0,
      "observers": {"cadence": 0.5, "thresholds_rel": [0.5]},
      "monitors": {"persistence": true}
    })");
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("format_double round-trips") {
    for (double x : {0.1, 1.0 / 3.0, 2.0, 1e-300, 123456.789, 6.02e23, -0.0}) {
        const std::string s = format_double(x);
        CHECK(std::strtod(s.c_str(), nullptr) == x);
    }
}

TEST_CASE("strict config parsing") {
    SUBCASE("valid config parses and validates") {
        const RunConfig c = parse_run_config(small_run_config());
        CHECK(c.params.chi == 0.5);
        CHECK(c.grid.n[0] == 501);
        CHECK(c.horizon == 8.0);
        CHECK(c.monitors.persistence);
        CHECK(c.absolute_thresholds() == std::vector<double>{0.5});
    }
    SUBCASE("missing required key names the path") {
        ordered_json j = small_run_config();
        j["params"].erase("a");
        try {
            parse_run_config(j);
            FAIL("expected config_error");
        } catch (const config_error& e) {
            CHECK(std::string(e.what()).find("params.a") != std::string::npos);
        }
    }
    SUBCASE("unknown keys are rejected with their path") {
        ordered_json j = small_run_config();
        j["params"]["zz"] = 1.0;
        try {
            parse_run_config(j);
            FAIL("expected config_error");
        } catch (const config_error& e) {
            CHECK(std::string(e.what()).find("params.zz") != std::string::npos);
        }
        ordered_json j2 = small_run_config();
        j2["typo_section"] = 1;
        CHECK_THROWS_AS(parse_run_config(j2), config_error);
    }
    SUBCASE("round trip is the identity") {
        const RunConfig c1 = parse_run_config(small_run_config());
        const ordered_json j1 = to_json(c1);
        const RunConfig c2 = parse_run_config(j1);
        CHECK(to_json(c2) == j1);
    }
    SUBCASE("grid/params dimension mismatch") {
        ordered_json j = small_run_config();
        j["params"]["dim"] = 2;
        CHECK_THROWS_AS(parse_run_config(j), config_error);
    }
}

TEST_CASE("environment overrides") {
    ordered_json j = small_run_config();
    setenv("CHEMFRONT_params__a", "2.5", 1);
    setenv("CHEMFRONT_horizon", "3.0", 1);
    apply_env_overrides(j);
    unsetenv("CHEMFRONT_params__a");
    unsetenv("CHEMFRONT_horizon");
    const RunConfig c = parse_run_config(j);
    CHECK(c.params.a == 2.5);
    CHECK(c.horizon == 3.0);
}

TEST_CASE("initial data library") {
    Grid g = Grid::line(-100.0, 100.0, 1001);

    SUBCASE("compact bump: peak, support, class membership") {
        InitialDataSpec spec;
        spec.radius = 10.0;
        State s = build_initial(spec, g);
        CHECK(s.u.values[500] == doctest::Approx(1.0));  // origin node
        for (int i = 0; i < g.n[0]; ++i)
            if (std::abs(g.coord(0, i)) >= 10.0) CHECK(s.u.values[i] == 0.0);
        CHECK(is_compactly_supported(s.u));
        CHECK(is_compactly_supported(s.v));
        CHECK_FALSE(is_front_like(s.u, {1, 0, 0}));
    }
    SUBCASE("front-like plateau and decay") {
        InitialDataSpec spec;
        spec.kind = InitialDataKind::FrontLike;
        spec.interface_pos = 0.0;
        spec.width = 4.0;
        State s = build_initial(spec, g);
        for (int i = 0; i < g.n[0]; ++i) {
            const double x = g.coord(0, i);
            if (x <= -4.0) CHECK(s.u.values[i] == 1.0);
            if (x >= 4.0) CHECK(s.u.values[i] == 0.0);
        }
        CHECK(is_front_like(s.u, {1, 0, 0}));
        CHECK_FALSE(is_compactly_supported(s.u));
        CHECK_FALSE(is_two_sided(s.u, {1, 0, 0}));
    }
    SUBCASE("two-sided slab") {
        InitialDataSpec spec;
        spec.kind = InitialDataKind::TwoSided;
        spec.radius = 12.0;
        spec.width = 3.0;
        State s = build_initial(spec, g);
        CHECK(is_two_sided(s.u, {1, 0, 0}));
        CHECK(is_compactly_supported(s.u));
        for (int i = 0; i < g.n[0]; ++i) {
            const double x = g.coord(0, i);
            if (std::abs(x) <= 9.0) CHECK(s.u.values[i] == 1.0);
            if (std::abs(x) >= 15.0) CHECK(s.u.values[i] == 0.0);
        }
    }
    SUBCASE("support clearance is enforced") {
        InitialDataSpec spec;
        spec.radius = 95.0;  // margin is 20 on a width-200 box
        CHECK_THROWS_AS(build_initial(spec, g), std::invalid_argument);

        InitialDataSpec fl;  // decaying edge too close to the downwind boundary
        fl.kind = InitialDataKind::FrontLike;
        fl.interface_pos = 85.0;
        CHECK_THROWS_AS(build_initial(fl, g), std::invalid_argument);
        fl.direction = {-1.0, 0.0, 0.0};  // mirrored geometry is caught too
        CHECK_THROWS_AS(build_initial(fl, g), std::invalid_argument);
        fl.interface_pos = 0.0;
        CHECK_NOTHROW(build_initial(fl, g));
    }
    SUBCASE("cutoff endpoints") {
        CHECK(smooth_cutoff(-1.0) == 1.0);
        CHECK(smooth_cutoff(1.0) == 0.0);
        CHECK(smooth_cutoff(0.0) == doctest::Approx(0.5));
        double prev = 1.0;
        for (double x = -1.0; x <= 1.0; x += 0.01) {
            CHECK(smooth_cutoff(x) <= prev + 1e-12);
            prev = smooth_cutoff(x);
        }
    }
}

TEST_CASE("snapshot io round trip") {
    TempDir tmp("chemfront_snap_test");
    Grid g = Grid::line(-3.0, 7.0, 33, Boundary::Periodic);
    Field f(g);
    for (std::size_t i = 0; i < f.size(); ++i) f.values[i] = std::sin(0.1 * i) * 1e-7;
    const std::string path = (tmp.path / "f.bin").string();
    write_field(path, f, 12.25);
    auto [f2, t2] = read_field(path);
    CHECK(t2 == 12.25);
    CHECK(f2.grid == g);
    for (std::size_t i = 0; i < f.size(); ++i) CHECK(f2.values[i] == f.values[i]);
    CHECK(fs::file_size(path) == 64 + f.size() * 8);

    SUBCASE("2d carries the extra axis bounds") {
        Grid g2 = Grid::box(2, {0.0, -1.0, 0}, {1.0, 1.0, 0}, {8, 16, 1});
        Field h(g2, 3.5);
        const std::string p2 = (tmp.path / "h.bin").string();
        write_field(p2, h, 0.0);
        auto [h2, th] = read_field(p2);
        CHECK(h2.grid == g2);
        CHECK(fs::file_size(p2) == 64 + 16 + h.size() * 8);
    }
    SUBCASE("corrupt magic is rejected") {
        std::ofstream out(tmp.path / "bad.bin", std::ios::binary);
        out << "NOTAFILE" << std::string(100, '\0');
        out.close();
        CHECK_THROWS((void)read_field((tmp.path / "bad.bin").string()));
    }
}

TEST_CASE("execute_run: smoke, artifacts, determinism") {
    TempDir tmp("chemfront_run_test");
    const RunConfig cfg = parse_run_config(small_run_config());

    const harness::RunOutcome out = harness::execute_run(cfg, (tmp.path / "r1").string(), 7);
    CHECK(out.record.termination.reason == Termination::Reason::Completed);
    CHECK(out.record.snapshots.size() == 17);
    CHECK(fs::exists(tmp.path / "r1" / "config.json"));
    CHECK(fs::exists(tmp.path / "r1" / "run_record.json"));
    CHECK(fs::exists(tmp.path / "r1" / "fronts.csv"));
    CHECK(fs::exists(tmp.path / "r1" / "verification_report.json"));
    CHECK(fs::exists(tmp.path / "r1" / "snapshots" / "u_000000.bin"));

    SUBCASE("front csv is nonempty with the pinned schema") {
        const std::string csv = read_file(tmp.path / "r1" / "fronts.csv");
        CHECK(csv.rfind("t,threshold,direction,position,trusted\n", 0) == 0);
        CHECK(std::count(csv.begin(), csv.end(), '\n') > 10);
    }
    SUBCASE("csv positions parse back to the in-memory values exactly") {
        std::istringstream lines(read_file(tmp.path / "r1" / "fronts.csv"));
        std::string line;
        std::getline(lines, line);  // header
        std::size_t row = 0;
        std::vector<double> flat;
        for (const auto& tr : out.record.traces)
            flat.insert(flat.end(), tr.positions.begin(), tr.positions.end());
        while (std::getline(lines, line)) {
            const auto p1 = line.find(',');
            const auto p2 = line.find(',', p1 + 1);
            const auto p3 = line.find(',', p2 + 1);
            const auto p4 = line.find(',', p3 + 1);
            const double pos = std::strtod(line.substr(p3 + 1, p4 - p3 - 1).c_str(), nullptr);
            REQUIRE(row < flat.size());
            CHECK(pos == flat[row]);
            ++row;
        }
        CHECK(row == flat.size());
    }
    SUBCASE("deterministic artifacts") {
        harness::execute_run(cfg, (tmp.path / "r2").string(), 7);
        CHECK(read_file(tmp.path / "r1" / "run_record.json") ==
              read_file(tmp.path / "r2" / "run_record.json"));
        CHECK(read_file(tmp.path / "r1" / "fronts.csv") ==
              read_file(tmp.path / "r2" / "fronts.csv"));
    }
    SUBCASE("verify recomputes the same verdicts and is idempotent") {
        const ordered_json rep1 = harness::verify_run((tmp.path / "r1").string());
        const std::string bytes1 = read_file(tmp.path / "r1" / "verify_report.json");
        const ordered_json rep2 = harness::verify_run((tmp.path / "r1").string());
        CHECK(read_file(tmp.path / "r1" / "verify_report.json") == bytes1);
        CHECK(rep1 == rep2);
        // the offline verdicts agree with the live ones
        const ordered_json live =
            ordered_json::parse(read_file(tmp.path / "r1" / "verification_report.json"));
        CHECK(rep1 == live);
    }
    SUBCASE("tampered snapshot fails the w-residual clause") {
        // negate u on a patch in one mid-run snapshot
        const fs::path victim = tmp.path / "r1" / "snapshots" / "u_000008.bin";
        auto [f, t] = read_field(victim.string());
        for (std::size_t i = 200; i < 260 && i < f.size(); ++i) f.values[i] = -f.values[i];
        write_field(victim.string(), f, t);
        const ordered_json rep = harness::verify_run((tmp.path / "r1").string());
        bool residual_failed = false;
        for (const auto& c : rep.at("clauses"))
            if (c.at("name") == "w_residual" && !c.at("pass").get<bool>()) residual_failed = true;
        CHECK(residual_failed);
    }
}

TEST_CASE("cmd_run exit codes") {
    TempDir tmp("chemfront_cmd_test");
    std::ostringstream log;

    SUBCASE("valid run exits 0") {
        const fs::path cfg = tmp.path / "cfg.json";
        std::ofstream(cfg) << small_run_config().dump(2);
        CHECK(harness::cmd_run(cfg.string(), (tmp.path / "out").string(), 0, log) == 0);
    }
    SUBCASE("missing key exits 2 and names the path") {
        ordered_json j = small_run_config();
        j["params"].erase("a");
        const fs::path cfg = tmp.path / "bad.json";
        std::ofstream(cfg) << j.dump(2);
        CHECK(harness::cmd_run(cfg.string(), (tmp.path / "out2").string(), 0, log) == 2);
        CHECK(log.str().find("params.a") != std::string::npos);
    }
    SUBCASE("forced instability exits 3 with a timestamp") {
        ordered_json j = small_run_config();
        j["scheme"] = {{"dt", 0.45}, {"dt_policy", "fixed"}};
        j["params"]["chi"] = 8.0;  // violent chemotaxis with a reckless fixed dt
        j["initial"]["v_amplitude"] = 5.0;
        j["monitors"] = ordered_json::object();
        const fs::path cfg = tmp.path / "unstable.json";
        std::ofstream(cfg) << j.dump(2);
        CHECK(harness::cmd_run(cfg.string(), (tmp.path / "out3").string(), 0, log) == 3);
        CHECK(log.str().find("numerical failure at t=") != std::string::npos);
    }
}

TEST_CASE("cmd_sweep") {
    TempDir tmp("chemfront_sweep_test");
    std::ostringstream log;
    ordered_json sweep;
    sweep["base"] = small_run_config();
    sweep["base"]["horizon"] = 6.0;
    sweep["base"]["monitors"] = {{"persistence", false}};
    sweep["sweep"] = {{"params.chi", {0.0, 0.4}}, {"params.b", {1.0}}};
    const fs::path cfgpath = tmp.path / "sweep.json";
    std::ofstream(cfgpath) << sweep.dump(2);

    SUBCASE("rows follow the lattice and bytes are deterministic across jobs") {
        CHECK(harness::cmd_sweep(cfgpath.string(), (tmp.path / "s1").string(), 1, 0, log) == 0);
        CHECK(harness::cmd_sweep(cfgpath.string(), (tmp.path / "s2").string(), 3, 0, log) == 0);
        const std::string csv1 = read_file(tmp.path / "s1" / "sweep.csv");
        const std::string csv2 = read_file(tmp.path / "s2" / "sweep.csv");
        CHECK(csv1 == csv2);
        std::istringstream lines(csv1);
        std::string header, row0, row1;
        std::getline(lines, header);
        std::getline(lines, row0);
        std::getline(lines, row1);
        CHECK(header ==
              "index,chi,a,b,lambda,mu,dim,damping_ok,speed,speed_rel_err,residual_max,pass,error");
        CHECK(row0.rfind("0,0,", 0) == 0);      // chi = 0 first
        CHECK(row1.rfind("1,0.4,", 0) == 0);    // then chi = 0.4
        CHECK(row0.find("true") != std::string::npos);
    }
    SUBCASE("single point sweep behaves like a run") {
        ordered_json one;
        one["base"] = small_run_config();
        one["base"]["monitors"] = {{"persistence", false}};
        const fs::path p1 = tmp.path / "one.json";
        std::ofstream(p1) << one.dump(2);
        CHECK(harness::cmd_sweep(p1.string(), (tmp.path / "s3").string(), 1, 0, log) == 0);
        const std::string csv = read_file(tmp.path / "s3" / "sweep.csv");
        CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);  // header + one row
    }
    SUBCASE("a broken point is recorded and the sweep continues") {
        ordered_json bad;
        bad["base"] = small_run_config();
        bad["base"]["monitors"] = {{"persistence", false}};
        bad["sweep"] = {{"params.a", {1.0, -1.0}}};
        const fs::path p2 = tmp.path / "bad.json";
        std::ofstream(p2) << bad.dump(2);
        CHECK(harness::cmd_sweep(p2.string(), (tmp.path / "s4").string(), 1, 0, log) == 0);
        const std::string csv = read_file(tmp.path / "s4" / "sweep.csv");
        CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
        CHECK(csv.find("a must be > 0") != std::string::npos);
    }
}

TEST_CASE("theory command report") {
    harness::TheoryRequest req;
    req.eps = 0.5;
    const ordered_json j = harness::theory_report(req);
    CHECK(j.at("abar").get<double>() == doctest::Approx(0.6875));
    CHECK(j.at("ell").get<double>() == doctest::Approx(8.885765876).epsilon(1e-9));
    CHECK(j.at("lambda_at_zero").get<double>() == doctest::Approx(0.65625));
    CHECK(j.at("kpp_speed").get<double>() == 2.0);
    CHECK(j.at("lambda_min_on_grid").get<double>() >=
          j.at("lambda_floor").get<double>() - 1e-12);
    CHECK(j.at("floor_attained").get<bool>());
    CHECK(j.at("eigen_selftest_pass").get<bool>());

    std::ostringstream os;
    CHECK(harness::cmd_theory(req, "", os) == 0);
    CHECK(os.str().find("\"kpp_speed\"") != std::string::npos);
}

TEST_CASE("envelope precondition rejection names a location") {
    TempDir tmp("chemfront_env_test");
    ordered_json j = small_run_config();
    j["monitors"] = {{"envelope", true}, {"envelope_k", 0.5}, {"envelope_m", 1e-6}};
    const RunConfig cfg = parse_run_config(j);
    try {
        harness::execute_run(cfg, "", 0);
        FAIL("expected config_error");
    } catch (const config_error& e) {
        CHECK(std::string(e.what()).find("envelope precondition") != std::string::npos);
        CHECK(std::string(e.what()).find("index") != std::string::npos);
    }
}
