#include "chemfront/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "chemfront/analysis.hpp"
#include "chemfront/field_ops.hpp"
#include "chemfront/tridiag.hpp"

namespace chemfront {

std::string to_string(DtPolicy p) { return p == DtPolicy::Fixed ? "fixed" : "adaptive_cfl"; }
std::string to_string(FluxScheme f) {
    return f == FluxScheme::CentralConservative ? "central" : "upwind";
}
std::string to_string(DiffusionIntegrator d) {
    return d == DiffusionIntegrator::BackwardEuler ? "backward_euler" : "crank_nicolson";
}

DtPolicy dt_policy_from_string(const std::string& s) {
    if (s == "fixed") return DtPolicy::Fixed;
    if (s == "adaptive_cfl") return DtPolicy::AdaptiveCfl;
    throw std::invalid_argument("unknown dt policy: " + s);
}
FluxScheme flux_from_string(const std::string& s) {
    if (s == "central") return FluxScheme::CentralConservative;
    if (s == "upwind") return FluxScheme::UpwindConservative;
    throw std::invalid_argument("unknown flux scheme: " + s);
}
DiffusionIntegrator diffusion_from_string(const std::string& s) {
    if (s == "backward_euler") return DiffusionIntegrator::BackwardEuler;
    if (s == "crank_nicolson") return DiffusionIntegrator::CrankNicolson;
    throw std::invalid_argument("unknown diffusion integrator: " + s);
}

void SchemeConfig::validate(int dim) const {
    if (!(dt > 0.0)) throw std::invalid_argument("SchemeConfig: dt must be > 0");
    if (!(safety > 0.0 && safety <= 1.0))
        throw std::invalid_argument("SchemeConfig: safety factor must be in (0, 1]");
    if (!(negativity_tol >= 0.0))
        throw std::invalid_argument("SchemeConfig: negativity tolerance must be >= 0");
    if (frame_speed != 0.0) {
        double n2 = 0.0;
        for (int a = 0; a < dim; ++a) n2 += frame_direction[a] * frame_direction[a];
        if (std::abs(n2 - 1.0) > 1e-12)
            throw std::invalid_argument("SchemeConfig: frame direction must be a unit vector");
    }
}

namespace {

// In-line neighbor index: mirror about the end nodes for Neumann, wrap for
// Periodic. Handles offsets up to the line length.
inline std::size_t nb(std::ptrdiff_t k, std::size_t m, Boundary b) {
    const auto mm = static_cast<std::ptrdiff_t>(m);
    if (b == Boundary::Periodic) {
        k %= mm;
        if (k < 0) k += mm;
        return static_cast<std::size_t>(k);
    }
    if (k < 0) return static_cast<std::size_t>(-k);
    if (k >= mm) return static_cast<std::size_t>(2 * (mm - 1) - k);
    return static_cast<std::size_t>(k);
}

void check_same_grid(const State& s) {
    if (!(s.u.grid == s.v.grid))
        throw std::invalid_argument("solver: u and v live on different grids");
}

// -chi * div(u grad v) with face fluxes F = u_face * chi * dv_face.
void add_chemotaxis(Field& out, const Field& u, const Field& v, const Params& p,
                    const SchemeConfig& sc) {
    if (p.chi == 0.0) return;
    const Grid& g = u.grid;
    std::vector<double> flux;
    for (int a = 0; a < g.dim; ++a) {
        const double dx = g.dx(a);
        const double inv_dx = 1.0 / dx;
        const std::size_t m = static_cast<std::size_t>(g.n[a]);
        const bool periodic = g.boundary == Boundary::Periodic;
        const std::size_t nfaces = periodic ? m : m - 1;  // face f sits between f and f+1
        flux.assign(nfaces, 0.0);
        for_each_line(g, a, [&](std::size_t base, std::size_t st, std::size_t mm) {
            for (std::size_t f = 0; f < nfaces; ++f) {
                const std::size_t i = base + f * st;
                const std::size_t j = base + ((f + 1) % mm) * st;
                const double w = p.chi * (v.values[j] - v.values[i]) * inv_dx;
                double uf;
                if (sc.flux == FluxScheme::CentralConservative || w == 0.0)
                    uf = 0.5 * (u.values[i] + u.values[j]);
                else
                    uf = w > 0.0 ? u.values[i] : u.values[j];
                flux[f] = uf * w;
            }
            for (std::size_t k = 0; k < mm; ++k) {
                double left, right;
                if (periodic) {
                    left = flux[(k + mm - 1) % mm];
                    right = flux[k];
                } else {
                    left = k == 0 ? 0.0 : flux[k - 1];       // zero-flux boundary faces
                    right = k == mm - 1 ? 0.0 : flux[k];
                }
                out.values[base + k * st] -= (right - left) * inv_dx;
            }
        });
    }
}

// + (c xi_a) d/dx_a, second-order upwind-biased differences.
void add_frame_advection(Field& out, const Field& f, const SchemeConfig& sc) {
    if (sc.frame_speed == 0.0) return;
    const Grid& g = f.grid;
    for (int a = 0; a < g.dim; ++a) {
        const double w = sc.frame_speed * sc.frame_direction[a];
        if (w == 0.0) continue;
        const double inv_2dx = 0.5 / g.dx(a);
        for_each_line(g, a, [&](std::size_t base, std::size_t st, std::size_t m) {
            for (std::size_t k = 0; k < m; ++k) {
                const auto kk = static_cast<std::ptrdiff_t>(k);
                double du;
                if (w > 0.0) {
                    const double f1 = f.values[base + nb(kk + 1, m, g.boundary) * st];
                    const double f2 = f.values[base + nb(kk + 2, m, g.boundary) * st];
                    du = (-3.0 * f.values[base + k * st] + 4.0 * f1 - f2) * inv_2dx;
                } else {
                    const double f1 = f.values[base + nb(kk - 1, m, g.boundary) * st];
                    const double f2 = f.values[base + nb(kk - 2, m, g.boundary) * st];
                    du = (3.0 * f.values[base + k * st] - 4.0 * f1 + f2) * inv_2dx;
                }
                out.values[base + k * st] += w * du;
            }
        });
    }
}

// Explicit part of the u equation (everything except diffusion).
Field explicit_rhs_u(const State& s, const Params& p, const SchemeConfig& sc) {
    Field out(s.u.grid);
    add_chemotaxis(out, s.u, s.v, p, sc);
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double u = s.u.values[i];
        out.values[i] += u * (p.a - p.b * u);
    }
    add_frame_advection(out, s.u, sc);
    return out;
}

Field explicit_rhs_v(const State& s, const Params& p, const SchemeConfig& sc) {
    Field out(s.v.grid);
    for (std::size_t i = 0; i < out.size(); ++i)
        out.values[i] = -p.lambda * s.v.values[i] + p.mu * s.u.values[i];
    add_frame_advection(out, s.v, sc);
    return out;
}

// One implicit diffusion substep along every axis (axes commute on a tensor
// grid, so sequential per-axis solves introduce no splitting error beyond
// each axis integrator's own order).
void implicit_diffusion(Field& f, double dt, DiffusionIntegrator integ) {
    const Grid& g = f.grid;
    const double theta = integ == DiffusionIntegrator::BackwardEuler ? dt : 0.5 * dt;
    std::vector<double> scratch;
    for (int a = 0; a < g.dim; ++a) {
        const std::size_t m = static_cast<std::size_t>(g.n[a]);
        const double kap = theta / (g.dx(a) * g.dx(a));
        TridiagFactor fac;
        CyclicTridiagFactor cfac;
        const bool periodic = g.boundary == Boundary::Periodic;
        std::vector<double> sub(m, -kap), diag(m, 1.0 + 2.0 * kap), sup(m, -kap);
        if (periodic) {
            cfac = CyclicTridiagFactor(std::move(sub), std::move(diag), std::move(sup), -kap, -kap);
        } else {
            sup[0] = -2.0 * kap;  // mirror ghosts
            sub[m - 1] = -2.0 * kap;
            fac = TridiagFactor(std::move(sub), std::move(diag), std::move(sup));
        }
        scratch.resize(m);
        for_each_line(g, a, [&](std::size_t base, std::size_t st, std::size_t mm) {
            double* line = f.values.data() + base;
            if (integ == DiffusionIntegrator::CrankNicolson) {
                // rhs = (I + theta lap_a) f
                for (std::size_t k = 0; k < mm; ++k) {
                    const auto kk = static_cast<std::ptrdiff_t>(k);
                    const double fl = line[nb(kk - 1, mm, g.boundary) * st];
                    const double fr = line[nb(kk + 1, mm, g.boundary) * st];
                    scratch[k] = line[k * st] + kap * (fl - 2.0 * line[k * st] + fr);
                }
                for (std::size_t k = 0; k < mm; ++k) line[k * st] = scratch[k];
            }
            if (periodic)
                cfac.solve(line, st);
            else
                fac.solve(line, st);
        });
    }
}

// Clip tiny negative values; fail hard on anything below the tolerance or
// non-finite.
long enforce_positivity(Field& f, double tol, double t, const char* name) {
    long clips = 0;
    for (double& v : f.values) {
        if (!std::isfinite(v))
            throw solver_error(std::string("unstable step: non-finite ") + name, t);
        if (v < 0.0) {
            if (v < -tol)
                throw solver_error(std::string("scheme failure: ") + name +
                                       " fell below -negativity_tol (" + std::to_string(v) + ")",
                                   t);
            v = 0.0;
            ++clips;
        }
    }
    return clips;
}

}  // namespace

Field rhs_u(const State& s, const Params& p, const SchemeConfig& sc) {
    check_same_grid(s);
    Field out = explicit_rhs_u(s, p, sc);
    Field lap = laplacian(s.u);
    for (std::size_t i = 0; i < out.size(); ++i) out.values[i] += lap.values[i];
    return out;
}

Field rhs_v(const State& s, const Params& p, const SchemeConfig& sc) {
    check_same_grid(s);
    Field out = explicit_rhs_v(s, p, sc);
    Field lap = laplacian(s.v);
    for (std::size_t i = 0; i < out.size(); ++i) out.values[i] += lap.values[i];
    return out;
}

double stable_dt(const State& s, const Params& p, const SchemeConfig& sc) {
    double bound = 1.0 / (2.0 * p.a);
    const double vel = std::abs(sc.frame_speed) + p.chi * max_grad_norm(s.v);
    if (vel > 0.0) bound = std::min(bound, s.u.grid.min_dx() / vel);
    return sc.safety * bound;
}

StepReport step(State& s, const Params& p, const SchemeConfig& sc, double dt_cap) {
    check_same_grid(s);
    p.validate();
    sc.validate(s.u.grid.dim);

    const double max_grad_v = max_grad_norm(s.v);
    double dt = sc.dt;
    if (sc.dt_policy == DtPolicy::AdaptiveCfl) {
        double bound = 1.0 / (2.0 * p.a);
        const double vel = std::abs(sc.frame_speed) + p.chi * max_grad_v;
        if (vel > 0.0) bound = std::min(bound, s.u.grid.min_dx() / vel);
        dt = std::min(dt, sc.safety * bound);
    }
    dt = std::min(dt, dt_cap);
    if (!(dt > 0.0)) throw solver_error("step: nonpositive dt", s.t);

    Field eu = explicit_rhs_u(s, p, sc);
    Field ev = explicit_rhs_v(s, p, sc);
    for (std::size_t i = 0; i < s.u.size(); ++i) s.u.values[i] += dt * eu.values[i];
    for (std::size_t i = 0; i < s.v.size(); ++i) s.v.values[i] += dt * ev.values[i];

    implicit_diffusion(s.u, dt, sc.diffusion);
    implicit_diffusion(s.v, dt, sc.diffusion);

    StepReport rep;
    rep.clip_count += enforce_positivity(s.u, sc.negativity_tol, s.t, "u");
    rep.clip_count += enforce_positivity(s.v, sc.negativity_tol, s.t, "v");

    s.t += dt;
    rep.dt = dt;
    rep.max_u = s.u.max();
    rep.max_v = s.v.max();
    rep.max_grad_v = max_grad_v;
    const double dx = s.u.grid.min_dx();
    rep.cfl_advective = std::abs(sc.frame_speed) * dt / dx;
    rep.cfl_chemotactic = p.chi * max_grad_v * dt / dx;
    return rep;
}

namespace {

struct FrontTracker {
    std::vector<FrontTrace> traces;
    std::vector<int> state;  // 0 = no samples yet, 1 = active, -1 = no front on this side
    double trusted_hi = 0.0, trusted_lo = 0.0, trusted_radius = 0.0;

    FrontTracker(const Grid& g, const ObserverConfig& obs) {
        const double margin0 = obs.clearance_fraction * (g.hi[0] - g.lo[0]);
        trusted_hi = g.hi[0] - margin0;
        trusted_lo = g.lo[0] + margin0;
        trusted_radius = trusted_hi;
        for (int a = 0; a < g.dim; ++a) {
            const double ma = obs.clearance_fraction * (g.hi[a] - g.lo[a]);
            trusted_radius = std::min(trusted_radius, std::min(g.hi[a] - ma, -(g.lo[a] + ma)));
        }
        for (double th : obs.thresholds) {
            if (g.dim == 1) {
                traces.push_back({th, "+e0", {}, {}, {}});
                traces.push_back({th, "-e0", {}, {}, {}});
            } else {
                traces.push_back({th, "radial", {}, {}, {}});
            }
        }
        state.assign(traces.size(), 0);
    }

    // Returns the time of the first clearance violation seen (if any).
    std::optional<double> sample(const State& s) {
        std::optional<double> violated;
        for (std::size_t ti = 0; ti < traces.size(); ++ti) {
            if (state[ti] == -1) continue;
            auto& tr = traces[ti];
            double pos;
            try {
                if (tr.direction == "radial")
                    pos = front_position_radial(s.u, tr.threshold);
                else
                    pos = front_position(s.u, tr.threshold, tr.direction == "+e0" ? +1 : -1);
            } catch (const front_not_found&) {
                continue;
            }
            bool ok;
            if (tr.direction == "+e0")
                ok = pos <= trusted_hi;
            else if (tr.direction == "-e0")
                ok = pos >= trusted_lo;
            else
                ok = pos <= trusted_radius;
            if (state[ti] == 0 && !ok) {
                // the level set already reaches past the margin on the first
                // sighting: there is no front to track on this side (plateau
                // data), not a clearance violation
                state[ti] = -1;
                continue;
            }
            state[ti] = 1;
            const bool was_trusted = tr.trusted.empty() || tr.trusted.back();
            const bool now_trusted = ok && was_trusted;  // sticky once violated
            if (!now_trusted && was_trusted) violated = s.t;
            tr.times.push_back(s.t);
            tr.positions.push_back(pos);
            tr.trusted.push_back(now_trusted ? 1 : 0);
        }
        return violated;
    }
};

SnapshotStat make_stat(const State& s) {
    SnapshotStat st;
    st.t = s.t;
    st.u_min = s.u.min();
    st.u_max = s.u.max();
    st.v_min = s.v.min();
    st.v_max = s.v.max();
    st.u_mass = mass(s.u);
    st.max_grad_v = max_grad_norm(s.v);
    return st;
}

}  // namespace

RunRecord run(State state, const Params& p, const SchemeConfig& sc, double horizon,
              const ObserverConfig& obs, const SampleHook& hook) {
    if (!(horizon >= 0.0)) throw std::invalid_argument("run: horizon must be >= 0");
    if (!(obs.cadence > 0.0)) throw std::invalid_argument("run: cadence must be > 0");
    state.validate();
    p.validate();
    sc.validate(state.u.grid.dim);
    if (state.u.min() < 0.0 || state.v.min() < 0.0)
        throw std::invalid_argument("run: initial densities must be nonnegative");

    RunRecord rec;
    rec.params = p;
    rec.grid = state.u.grid;
    rec.dt_base = sc.dt;
    rec.dt_policy = to_string(sc.dt_policy);
    rec.safety = sc.safety;
    rec.flux = to_string(sc.flux);
    rec.diffusion = to_string(sc.diffusion);
    rec.frame_speed = sc.frame_speed;
    rec.horizon = horizon;
    rec.clearance_margin = obs.clearance_fraction * (rec.grid.hi[0] - rec.grid.lo[0]);

    FrontTracker tracker(rec.grid, obs);

    const double t0 = state.t;
    std::size_t k = 0;
    try {
        while (true) {
            const double t_k = std::min(t0 + static_cast<double>(k) * obs.cadence, t0 + horizon);
            // advance to the sample time
            while (state.t < t_k - 1e-12) {
                const StepReport rep = step(state, p, sc, t_k - state.t);
                ++rec.steps;
                rec.clip_count += rep.clip_count;
                rec.max_cfl_advective = std::max(rec.max_cfl_advective, rep.cfl_advective);
                rec.max_cfl_chemotactic = std::max(rec.max_cfl_chemotactic, rep.cfl_chemotactic);
            }
            rec.snapshots.push_back(make_stat(state));
            if (obs.track_fronts) {
                if (auto viol = tracker.sample(state); viol && !rec.clearance_violated_at)
                    rec.clearance_violated_at = *viol;
            }
            if (t_k >= t0 + horizon - 1e-12) {
                if (hook) hook(k, SamplePair{&state, nullptr, 0.0});
                break;
            }
            // one more step so residual-type monitors see a consecutive pair
            const State at = state;
            const double next_t = std::min(t0 + static_cast<double>(k + 1) * obs.cadence,
                                           t0 + horizon);
            const StepReport rep = step(state, p, sc, next_t - state.t);
            ++rec.steps;
            rec.clip_count += rep.clip_count;
            rec.max_cfl_advective = std::max(rec.max_cfl_advective, rep.cfl_advective);
            rec.max_cfl_chemotactic = std::max(rec.max_cfl_chemotactic, rep.cfl_chemotactic);
            if (hook) hook(k, SamplePair{&at, &state, rep.dt});
            ++k;
        }
        rec.termination = {Termination::Reason::Completed, state.t, ""};
    } catch (const solver_error& e) {
        rec.termination = {Termination::Reason::NumericalFailure, e.t, e.what()};
    }
    rec.traces = std::move(tracker.traces);
    return rec;
}

}  // namespace chemfront
