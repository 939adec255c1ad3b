#include "doctest.h"

#include <cmath>
#include <random>

#include "chemfront/analysis.hpp"
#include "chemfront/field_ops.hpp"
#include "chemfront/initial_data.hpp"
#include "chemfront/solver.hpp"

using namespace chemfront;

namespace {

State make_state(const Grid& g, double u0 = 0.0, double v0 = 0.0, double t = 0.0) {
    State s;
    s.u = Field(g, u0);
    s.v = Field(g, v0);
    s.t = t;
    return s;
}

}  // namespace

TEST_CASE("front position on profiles") {
    // nodes straddle zero, so the step u=1 (x<0), u=0 (x>=0) crosses
    // theta=0.5 exactly at the origin under midpoint interpolation
    Grid g = Grid::line(-10.05, 9.95, 201);  // dx = 0.1, nodes at ...,-0.05, 0.05,...
    Field u(g);
    for (int i = 0; i < g.n[0]; ++i) u.values[i] = g.coord(0, i) < 0.0 ? 1.0 : 0.0;
    CHECK(std::abs(front_position(u, 0.5, +1)) <= 1e-12);

    SUBCASE("piecewise linear ramp crosses exactly") {
        Grid gl = Grid::line(0.0, 1.0, 101);
        Field f(gl);
        for (int i = 0; i <= 100; ++i) f.values[i] = 1.0 - gl.coord(0, i);
        for (double th : {0.25, 0.5, 0.9})
            CHECK(front_position(f, th, +1) == doctest::Approx(1.0 - th).epsilon(1e-12));
    }
    SUBCASE("translation equivariance on grid-aligned shifts") {
        Grid gl = Grid::line(-40.0, 40.0, 801);
        Field f(gl);
        for (int i = 0; i < gl.n[0]; ++i) {
            const double x = gl.coord(0, i);
            f.values[i] = 1.0 / (1.0 + std::exp(2.0 * x));
        }
        const double p0 = front_position(f, 0.37, +1);
        for (int shift : {3, 17, 120}) {
            Field fs(gl);
            for (int i = shift; i < gl.n[0]; ++i) fs.values[i] = f.values[i - shift];
            for (int i = 0; i < shift; ++i) fs.values[i] = f.values[0];
            const double ps = front_position(fs, 0.37, +1);
            CHECK(ps == doctest::Approx(p0 + shift * gl.dx(0)).epsilon(1e-12));
        }
    }
    SUBCASE("left crossing of a two-sided profile") {
        Grid gl = Grid::line(-20.0, 20.0, 401);
        Field f(gl);
        for (int i = 0; i < gl.n[0]; ++i) {
            const double x = gl.coord(0, i);
            f.values[i] = std::abs(x) < 5.0 ? 1.0 : 0.0;
        }
        const double right = front_position(f, 0.5, +1);
        const double left = front_position(f, 0.5, -1);
        CHECK(right == doctest::Approx(-left).epsilon(1e-12));
        CHECK(right == doctest::Approx(4.95).epsilon(1e-9));  // midpoint interpolation
    }
    SUBCASE("missing level") {
        Field z(g, 0.0);
        CHECK_THROWS_AS(front_position(z, 0.5, +1), front_not_found);
        CHECK_THROWS_AS(front_position(u, -0.5, +1), std::invalid_argument);
    }
}

TEST_CASE("radial front in 2d") {
    Grid g = Grid::box(2, {-20.0, -20.0, 0}, {20.0, 20.0, 0}, {201, 201, 1});
    Field u(g);
    for (int i = 0; i < 201; ++i)
        for (int j = 0; j < 201; ++j) {
            const double x = g.coord(0, i), y = g.coord(1, j);
            const double r = std::sqrt(x * x + y * y);
            u.values[static_cast<std::size_t>(i) * 201 + j] = 1.0 / (1.0 + std::exp(r - 8.0));
        }
    const double pos = front_position_radial(u, 0.5);
    CHECK(pos == doctest::Approx(8.0).epsilon(0.05));
}

TEST_CASE("speed fitting") {
    SUBCASE("exact line") {
        FrontTrace tr;
        tr.threshold = 0.5;
        tr.direction = "+e0";
        for (int i = 0; i <= 20; ++i) {
            tr.times.push_back(0.5 * i);
            tr.positions.push_back(2.0 * (0.5 * i) + 1.0);
            tr.trusted.push_back(1);
        }
        const SpeedFit f = fit_speed(tr, 0.5);
        CHECK(f.speed == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(f.intercept == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(f.residual_rms <= 1e-12);
    }
    SUBCASE("quantization noise bound") {
        const double dx = 0.1;
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> noise(-dx / 2.0, dx / 2.0);
        FrontTrace tr;
        tr.threshold = 0.5;
        tr.direction = "+e0";
        for (int i = 0; i <= 100; ++i) {
            const double t = 0.5 * i;
            tr.times.push_back(t);
            tr.positions.push_back(2.0 * t + noise(rng));
            tr.trusted.push_back(1);
        }
        const SpeedFit f = fit_speed(tr, 0.5);
        const double window = f.t_end - f.t_begin;
        CHECK(std::abs(f.speed - 2.0) <= 2.0 * dx / window);
    }
    SUBCASE("constant positions give zero speed") {
        FrontTrace tr;
        for (int i = 0; i < 10; ++i) {
            tr.times.push_back(i);
            tr.positions.push_back(3.25);
            tr.trusted.push_back(1);
        }
        CHECK(fit_speed(tr, 1.0).speed == doctest::Approx(0.0).epsilon(1e-14));
    }
    SUBCASE("too few samples") {
        FrontTrace tr;
        for (int i = 0; i < 4; ++i) {
            tr.times.push_back(i);
            tr.positions.push_back(i);
            tr.trusted.push_back(1);
        }
        CHECK_THROWS_AS(fit_speed(tr, 1.0), std::invalid_argument);
    }
    SUBCASE("untrusted samples are excluded") {
        FrontTrace tr;
        for (int i = 0; i <= 20; ++i) {
            tr.times.push_back(i);
            tr.positions.push_back(2.0 * i);
            tr.trusted.push_back(i <= 15 ? 1 : 0);
        }
        tr.positions[18] = 0.0;  // garbage in the untrusted tail
        const SpeedFit f = fit_speed(tr, 1.0);
        CHECK(f.speed == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(f.t_end == doctest::Approx(15.0));
    }
}

TEST_CASE("interior and exterior region extremes") {
    Grid g = Grid::line(-10.0, 10.0, 201);
    Params p;

    SUBCASE("steady state fills every region") {
        State s = make_state(g, 0.5, 0.25, 10.0);
        const RegionReport ri = interior_infimum(s, 1.0);
        CHECK(ri.u == 0.5);
        CHECK(ri.v == 0.25);
    }
    SUBCASE("tiny time region falls back to the origin cell") {
        State s = make_state(g, 0.0, 0.0, 1e-9);
        s.u.values[100] = 0.7;  // the origin node
        const RegionReport ri = interior_infimum(s, 1.0);
        CHECK(ri.u == 0.7);
    }
    SUBCASE("exterior beyond a compact support is zero, and trust is flagged") {
        State s = make_state(g, 0.0, 0.0, 1.0);
        for (int i = 0; i < g.n[0]; ++i) {
            const double x = g.coord(0, i);
            s.u.values[i] = std::abs(x) <= 2.0 ? 1.0 : 0.0;
        }
        const RegionReport re = exterior_supremum(s, 3.0);
        CHECK(re.u == 0.0);
        const RegionReport flagged = exterior_supremum(s, 3.0, RegionShape::Ball, {1, 0, 0}, 8.0);
        CHECK(flagged.exceeds_trusted);
    }
    SUBCASE("halfspace and slab shapes") {
        State s = make_state(g, 0.0, 0.0, 2.0);
        for (int i = 0; i < g.n[0]; ++i) {
            const double x = g.coord(0, i);
            s.u.values[i] = x < 0.0 ? 2.0 : (x < 5.0 ? 1.0 : 0.1);
        }
        const RegionReport h = interior_infimum(s, 1.0, RegionShape::HalfSpace);  // x <= 2
        CHECK(h.u == doctest::Approx(1.0));
        const RegionReport sl = interior_infimum(s, 1.0, RegionShape::Slab);  // |x| <= 2
        CHECK(sl.u == doctest::Approx(1.0));
    }
}

TEST_CASE("w functional") {
    Grid g = Grid::line(-5.0, 5.0, 101);
    Params p;
    p.chi = 0.6;
    p.mu = 1.5;

    SUBCASE("constant chemical leaves w = u") {
        State s = make_state(g, 0.8, 2.0);
        const Field w = w_functional(s, p);
        for (double v : w.values) CHECK(v == doctest::Approx(0.8).epsilon(1e-14));
    }
    SUBCASE("linear chemical adds chi/(2 mu) |grad v|^2") {
        State s = make_state(g, 0.0, 0.0);
        for (int i = 0; i < g.n[0]; ++i) s.v.values[i] = g.coord(0, i);
        const Field w = w_functional(s, p);
        const double want = p.chi / (2.0 * p.mu);
        for (int i = 1; i + 1 < g.n[0]; ++i)
            CHECK(w.values[i] == doctest::Approx(want).epsilon(1e-12));
    }
    SUBCASE("w dominates u") {
        State s = make_state(g, 0.3, 0.0);
        for (int i = 0; i < g.n[0]; ++i) s.v.values[i] = std::sin(g.coord(0, i));
        const Field w = w_functional(s, p);
        for (std::size_t i = 0; i < w.size(); ++i) CHECK(w.values[i] >= s.u.values[i]);
    }
}

TEST_CASE("supersolution residual") {
    Params p;
    p.a = 1.0;
    p.b = 1.0;
    p.chi = 0.5;
    p.mu = 1.0;
    p.lambda = 1.0;
    Grid g = Grid::line(-10.0, 10.0, 201);

    SUBCASE("steady state evaluates exactly to -a^2/b") {
        auto [us, vs] = steady_state(p);
        State s0 = make_state(g, us, vs, 0.0);
        State s1 = make_state(g, us, vs, 0.1);
        const Field r = supersolution_residual(s0, s1, p);
        for (double v : r.values) CHECK(v == doctest::Approx(-p.a * p.a / p.b).epsilon(1e-12));
    }
    SUBCASE("flipped damping term turns the bulk positive") {
        auto [us, vs] = steady_state(p);
        State s0 = make_state(g, us, vs, 0.0);
        State s1 = make_state(g, us, vs, 0.1);
        const Field r = supersolution_residual(s0, s1, p, true);
        const double beta = p.b - p.dim * p.mu * p.chi / 4.0;
        const double want = -p.a * p.a / p.b + 2.0 * beta * us * us;
        CHECK(r.max() == doctest::Approx(want).epsilon(1e-12));
        CHECK(r.max() > 0.0);
    }
    SUBCASE("solver trajectory stays below a modest ceiling") {
        InitialDataSpec spec;
        spec.radius = 4.0;
        spec.width = 1.0;
        State s = build_initial(spec, Grid::line(-30.0, 30.0, 601));
        SchemeConfig sc;
        sc.dt = 0.05;
        sc.dt_policy = DtPolicy::Fixed;
        Field rmax_field(s.u.grid);
        double rmax = -1e300;
        for (int it = 0; it < 100; ++it) {
            const State before = s;
            step(s, p, sc);
            if (it == 0) continue;  // initial kink transient
            rmax = std::max(rmax, supersolution_residual(before, s, p).max());
        }
        CHECK(rmax <= 3.0 * (0.1 * 0.1 + 0.05));
    }
    SUBCASE("misordered pair is rejected") {
        State s0 = make_state(g, 1.0, 1.0, 1.0);
        CHECK_THROWS_AS(supersolution_residual(s0, s0, p), std::invalid_argument);
    }
}

TEST_CASE("envelope fitting and violation") {
    Params p;
    p.a = 1.0;
    p.b = 1.0;
    p.chi = 0.5;
    Grid g = Grid::line(-60.0, 60.0, 1201);
    InitialDataSpec spec;
    spec.radius = 5.0;
    State s0 = build_initial(spec, g);

    SUBCASE("fitted amplitudes touch the data from above") {
        const EnvelopeParams env = fit_envelope(s0, p, 0.5, {1, 0, 0}, false);
        CHECK(env.amplitude_u > 0.0);
        CHECK(env.amplitude_v == doctest::Approx(p.mu * env.amplitude_u / (p.a + p.lambda)));
        const EnvelopeViolation v0 = envelope_violation(s0, p, env);
        CHECK(v0.u <= 1e-12);
        CHECK(v0.v <= 1e-12);
        CHECK(v0.u >= -1e-9);  // the fit is tight somewhere
    }
    SUBCASE("holds along a short trajectory") {
        const EnvelopeParams env = fit_envelope(s0, p, 0.5, {1, 0, 0}, false);
        SchemeConfig sc;
        State s = s0;
        double worst = -1e300;
        ObserverConfig obs;
        obs.cadence = 1.0;
        obs.thresholds = {0.5};
        run(s, p, sc, 20.0, obs, [&](std::size_t, const SamplePair& sp) {
            worst = std::max(worst, envelope_violation(*sp.at, p, env).u);
        });
        CHECK(worst <= 3.0 * (0.1 * 0.1 + 0.2));
    }
    SUBCASE("two-sided envelope covers symmetric data") {
        InitialDataSpec two;
        two.kind = InitialDataKind::TwoSided;
        two.radius = 6.0;
        two.width = 2.0;
        State st = build_initial(two, g);
        const EnvelopeParams env = fit_envelope(st, p, 0.4, {1, 0, 0}, true);
        const EnvelopeViolation v0 = envelope_violation(st, p, env);
        CHECK(v0.u <= 1e-12);
    }
}

TEST_CASE("heat convolution against the analytic gaussian") {
    Grid g = Grid::line(-20.0, 20.0, 801, Boundary::Periodic);
    Field f(g);
    const double sig2 = 1.0;
    for (int i = 0; i < g.n[0]; ++i) {
        const double x = g.coord(0, i);
        f.values[i] = std::exp(-x * x / (2.0 * sig2));
    }
    const double s = 0.5;
    const Field got = heat_convolve(f, s);
    const double var = sig2 + 2.0 * s;
    double err = 0.0;
    for (int i = 0; i < g.n[0]; ++i) {
        const double x = g.coord(0, i);
        const double want = std::sqrt(sig2 / var) * std::exp(-x * x / (2.0 * var));
        err = std::max(err, std::abs(got.values[i] - want));
    }
    CHECK(err <= 1e-4);
}

TEST_CASE("duhamel reconstruction") {
    Params p;
    p.lambda = 1.0;
    p.mu = 1.0;
    Grid g = Grid::line(-5.0, 5.0, 64, Boundary::Periodic);

    SUBCASE("uniform source matches the closed form") {
        const double U0 = 0.7;
        std::vector<std::pair<double, Field>> hist;
        for (int i = 0; i <= 200; ++i) hist.emplace_back(0.01 * i, Field(g, U0));
        const Field v = duhamel_v(hist, Field(g, 0.0), p, 2.0);
        const double want = p.mu * U0 / p.lambda * (1.0 - std::exp(-p.lambda * 2.0));
        for (double x : v.values) CHECK(x == doctest::Approx(want).epsilon(1e-5));
    }
    SUBCASE("pure decay of the initial chemical") {
        Field v0(g);
        for (int i = 0; i < g.n[0]; ++i) {
            const double x = g.coord(0, i);
            v0.values[i] = std::exp(-4.0 * x * x);
        }
        std::vector<std::pair<double, Field>> hist;
        for (int i = 0; i <= 100; ++i) hist.emplace_back(0.01 * i, Field(g, 0.0));
        const Field v = duhamel_v(hist, v0, p, 1.0);
        Field want = heat_convolve(v0, 1.0);
        for (double& w : want.values) w *= std::exp(-1.0);
        CHECK(linf_diff(v, want) <= 1e-12);
    }
    SUBCASE("insufficient history is rejected") {
        std::vector<std::pair<double, Field>> hist;
        hist.emplace_back(0.0, Field(g, 1.0));
        hist.emplace_back(0.5, Field(g, 1.0));
        CHECK_THROWS_AS(duhamel_v(hist, Field(g, 0.0), p, 2.0), std::invalid_argument);
    }
}

TEST_CASE("ball extremes and persistence") {
    Grid g = Grid::line(-10.0, 10.0, 201);
    Field f(g, 1.0);
    f.values[100] = 0.2;
    auto [lo, hi] = ball_extremes(f, 3.0);
    CHECK(lo == 0.2);
    CHECK(hi == 1.0);

    SUBCASE("synthetic colonization signal") {
        BallSignal sig;
        sig.radius = 3.0;
        for (int i = 0; i <= 50; ++i) {
            const double t = i;
            sig.times.push_back(t);
            sig.sup_u.push_back(1.0);                          // bump present from the start
            sig.inf_u.push_back(t < 20.0 ? 1e-9 : 0.8);        // colonized at t = 20
        }
        const PersistenceReport rep = persistence_check(sig, 0.1, 5.0);
        CHECK(rep.triggered);
        CHECK(rep.trigger_time == 0.0);
        CHECK(rep.established);
        CHECK(rep.established_time == 20.0);
        CHECK(rep.window_start == 25.0);
        CHECK(rep.delta_meas == doctest::Approx(0.8));
        CHECK(rep.never_below_half);
    }
    SUBCASE("never established") {
        BallSignal sig;
        sig.radius = 3.0;
        for (int i = 0; i <= 10; ++i) {
            sig.times.push_back(i);
            sig.sup_u.push_back(0.05);
            sig.inf_u.push_back(0.0);
        }
        const PersistenceReport rep = persistence_check(sig, 0.1, 5.0);
        CHECK_FALSE(rep.triggered);
        CHECK_FALSE(rep.established);
    }
}
