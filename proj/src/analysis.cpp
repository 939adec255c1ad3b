#include "chemfront/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "chemfront/field_ops.hpp"

namespace chemfront {

namespace {

void decompose(const Grid& g, std::size_t idx, std::array<int, 3>& ijk) {
    ijk = {0, 0, 0};
    for (int a = g.dim - 1; a >= 0; --a) {
        ijk[a] = static_cast<int>(idx % static_cast<std::size_t>(g.n[a]));
        idx /= static_cast<std::size_t>(g.n[a]);
    }
}

inline void point(const Grid& g, const std::array<int, 3>& ijk, std::array<double, 3>& x) {
    for (int a = 0; a < g.dim; ++a) x[a] = g.coord(a, ijk[a]);
    for (int a = g.dim; a < 3; ++a) x[a] = 0.0;
}

}  // namespace

double front_position(const Field& u, double threshold, int direction) {
    const Grid& g = u.grid;
    if (g.dim != 1) throw std::invalid_argument("front_position: 1d fields only; use radial");
    if (!(threshold > 0.0)) throw std::invalid_argument("front_position: threshold must be > 0");
    const int n = g.n[0];
    if (direction >= 0) {
        int i = n - 1;
        while (i >= 0 && u.values[i] < threshold) --i;
        if (i < 0) throw front_not_found("threshold never attained");
        if (i == n - 1) return g.coord(0, i);
        const double du = u.values[i] - u.values[i + 1];
        return g.coord(0, i) + g.dx(0) * (u.values[i] - threshold) / du;
    }
    int i = 0;
    while (i < n && u.values[i] < threshold) ++i;
    if (i == n) throw front_not_found("threshold never attained");
    if (i == 0) return g.coord(0, 0);
    const double du = u.values[i] - u.values[i - 1];
    return g.coord(0, i) - g.dx(0) * (u.values[i] - threshold) / du;
}

std::vector<double> radial_max_profile(const Field& u) {
    const Grid& g = u.grid;
    const double dx = g.min_dx();
    double rmax = std::numeric_limits<double>::max();
    for (int a = 0; a < g.dim; ++a)
        rmax = std::min(rmax, std::min(g.hi[a], -g.lo[a]));  // inscribed radius
    if (rmax <= 0.0) throw std::invalid_argument("radial_max_profile: box must contain the origin");
    const std::size_t nbins = static_cast<std::size_t>(rmax / dx) + 1;
    std::vector<double> prof(nbins, 0.0);
    std::array<int, 3> ijk;
    std::array<double, 3> x;
    for (std::size_t i = 0; i < u.size(); ++i) {
        decompose(g, i, ijk);
        point(g, ijk, x);
        double r2 = 0.0;
        for (int a = 0; a < g.dim; ++a) r2 += x[a] * x[a];
        const double r = std::sqrt(r2);
        if (r >= rmax) continue;
        const auto bin = static_cast<std::size_t>(r / dx);
        prof[bin] = std::max(prof[bin], u.values[i]);
    }
    return prof;
}

double front_position_radial(const Field& u, double threshold) {
    if (!(threshold > 0.0))
        throw std::invalid_argument("front_position_radial: threshold must be > 0");
    const std::vector<double> prof = radial_max_profile(u);
    const double dx = u.grid.min_dx();
    int i = static_cast<int>(prof.size()) - 1;
    while (i >= 0 && prof[i] < threshold) --i;
    if (i < 0) throw front_not_found("threshold never attained");
    const double ri = (i + 0.5) * dx;  // bin centers
    if (i == static_cast<int>(prof.size()) - 1) return ri;
    const double du = prof[i] - prof[i + 1];
    if (du <= 0.0) return ri;
    return ri + dx * (prof[i] - threshold) / du;
}

SpeedFit fit_speed(const FrontTrace& trace, double window_fraction) {
    if (!(window_fraction > 0.0 && window_fraction <= 1.0))
        throw std::invalid_argument("fit_speed: window fraction must be in (0, 1]");
    std::vector<double> ts, ps;
    for (std::size_t i = 0; i < trace.times.size(); ++i) {
        if (trace.trusted.empty() || trace.trusted[i]) {
            ts.push_back(trace.times[i]);
            ps.push_back(trace.positions[i]);
        }
    }
    if (ts.size() < 5) throw std::invalid_argument("fit_speed: need at least 5 trusted samples");
    const double t_end = ts.back();
    const double t_begin = t_end - window_fraction * (t_end - ts.front());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t cnt = 0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        if (ts[i] < t_begin - 1e-12) continue;
        sx += ts[i];
        sy += ps[i];
        sxx += ts[i] * ts[i];
        sxy += ts[i] * ps[i];
        ++cnt;
    }
    if (cnt < 5) throw std::invalid_argument("fit_speed: need at least 5 samples in the window");
    const double denom = cnt * sxx - sx * sx;
    SpeedFit fit;
    fit.speed = (cnt * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.speed * sx) / cnt;
    fit.t_begin = t_begin;
    fit.t_end = t_end;
    fit.count = cnt;
    double ss = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        if (ts[i] < t_begin - 1e-12) continue;
        const double r = ps[i] - (fit.intercept + fit.speed * ts[i]);
        ss += r * r;
    }
    fit.residual_rms = std::sqrt(ss / cnt);
    return fit;
}

namespace {

enum class Side { Interior, Exterior };

RegionReport region_extreme(const State& s, double cone_speed, RegionShape shape,
                            const std::array<double, 3>& xi, Side side, double trusted_radius) {
    const Grid& g = s.u.grid;
    const double r = cone_speed * s.t;
    RegionReport rep;
    const bool interior = side == Side::Interior;
    rep.u = interior ? std::numeric_limits<double>::max() : -std::numeric_limits<double>::max();
    rep.v = rep.u;
    bool any = false;
    std::size_t nearest = 0;
    double nearest_d = std::numeric_limits<double>::max();
    std::array<int, 3> ijk;
    std::array<double, 3> x;
    for (std::size_t i = 0; i < g.size(); ++i) {
        decompose(g, i, ijk);
        point(g, ijk, x);
        double measure = 0.0;
        double norm = 0.0;
        double dot = 0.0;
        for (int a = 0; a < g.dim; ++a) {
            norm += x[a] * x[a];
            dot += x[a] * xi[a];
        }
        norm = std::sqrt(norm);
        switch (shape) {
            case RegionShape::Ball: measure = norm; break;
            case RegionShape::HalfSpace: measure = dot; break;
            case RegionShape::Slab: measure = std::abs(dot); break;
        }
        if (measure < nearest_d) {
            nearest_d = measure;
            nearest = i;
        }
        const bool in_region = interior ? measure <= r : measure >= r;
        if (!in_region) continue;
        any = true;
        if (interior) {
            rep.u = std::min(rep.u, s.u.values[i]);
            rep.v = std::min(rep.v, s.v.values[i]);
        } else {
            rep.u = std::max(rep.u, s.u.values[i]);
            rep.v = std::max(rep.v, s.v.values[i]);
            if (trusted_radius > 0.0 && norm > trusted_radius) rep.exceeds_trusted = true;
        }
    }
    if (!any) {
        rep.region_empty = true;
        rep.u = s.u.values[nearest];
        rep.v = s.v.values[nearest];
    }
    return rep;
}

}  // namespace

RegionReport interior_infimum(const State& s, double cone_speed, RegionShape shape,
                              const std::array<double, 3>& xi) {
    return region_extreme(s, cone_speed, shape, xi, Side::Interior, 0.0);
}

RegionReport exterior_supremum(const State& s, double cone_speed, RegionShape shape,
                               const std::array<double, 3>& xi, double trusted_radius) {
    return region_extreme(s, cone_speed, shape, xi, Side::Exterior, trusted_radius);
}

Field w_functional(const State& s, const Params& p) {
    Field w = grad_magnitude_sq(s.v);
    const double coeff = p.chi / (2.0 * p.mu);
    for (std::size_t i = 0; i < w.size(); ++i)
        w.values[i] = s.u.values[i] + coeff * w.values[i];
    return w;
}

Field supersolution_residual(const State& at, const State& next, const Params& p,
                             bool flip_damping_term) {
    const double dt = next.t - at.t;
    if (!(dt > 0.0)) throw std::invalid_argument("supersolution_residual: need next.t > at.t");
    const Field w0 = w_functional(at, p);
    const Field w1 = w_functional(next, p);
    Field wbar(at.u.grid);
    for (std::size_t i = 0; i < wbar.size(); ++i)
        wbar.values[i] = 0.5 * (w0.values[i] + w1.values[i]);
    const Field lap = laplacian(wbar);
    Field r(at.u.grid);
    for (std::size_t i = 0; i < r.size(); ++i)
        r.values[i] =
            (w1.values[i] - w0.values[i]) / dt - lap.values[i] - p.a * wbar.values[i];
    if (flip_damping_term) {
        const double beta = p.b - p.dim * p.mu * p.chi / 4.0;
        for (std::size_t i = 0; i < r.size(); ++i) {
            const double ubar = 0.5 * (at.u.values[i] + next.u.values[i]);
            r.values[i] += 2.0 * beta * ubar * ubar;
        }
    }
    return r;
}

namespace {

inline double envelope_decay(double k, double proj, double shift, bool two_sided) {
    const double e1 = std::exp(-k * (proj - shift));
    if (!two_sided) return e1;
    return std::min(e1, std::exp(k * (proj + shift)));
}

}  // namespace

EnvelopeParams fit_envelope(const State& initial, const Params& p, double k,
                            const std::array<double, 3>& xi, bool two_sided) {
    if (!(k > 0.0)) throw std::domain_error("fit_envelope: k must be > 0");
    const Field w0 = w_functional(initial, p);
    const Grid& g = initial.u.grid;
    double mw = 0.0, mv = 0.0;
    std::array<int, 3> ijk;
    std::array<double, 3> x;
    for (std::size_t i = 0; i < g.size(); ++i) {
        decompose(g, i, ijk);
        point(g, ijk, x);
        double proj = 0.0;
        for (int a = 0; a < g.dim; ++a) proj += x[a] * xi[a];
        const double decay = envelope_decay(k, proj, 0.0, two_sided);
        if (w0.values[i] > 0.0) mw = std::max(mw, w0.values[i] / decay);
        if (initial.v.values[i] > 0.0) mv = std::max(mv, initial.v.values[i] / decay);
    }
    EnvelopeParams env;
    env.k = k;
    env.xi = xi;
    env.two_sided = two_sided;
    // M covers w0 directly and v0 through d = mu*M/(a+lambda)
    env.amplitude_u = std::max(mw, mv * (p.a + p.lambda) / p.mu);
    env.amplitude_v = p.mu * env.amplitude_u / (p.a + p.lambda);
    return env;
}

EnvelopeViolation envelope_violation(const State& s, const Params& p, const EnvelopeParams& env) {
    const double c = (env.k * env.k + p.a) / env.k;
    const double shift = c * s.t;
    const Field w = w_functional(s, p);
    const Grid& g = s.u.grid;
    EnvelopeViolation out;
    out.u = -std::numeric_limits<double>::max();
    out.v = -std::numeric_limits<double>::max();
    std::array<int, 3> ijk;
    std::array<double, 3> x;
    for (std::size_t i = 0; i < g.size(); ++i) {
        decompose(g, i, ijk);
        point(g, ijk, x);
        double proj = 0.0;
        for (int a = 0; a < g.dim; ++a) proj += x[a] * env.xi[a];
        const double decay = envelope_decay(env.k, proj, shift, env.two_sided);
        const double vu = w.values[i] - env.amplitude_u * decay;
        const double vv = s.v.values[i] - env.amplitude_v * decay;
        if (vu > out.u) {
            out.u = vu;
            out.u_arg = i;
        }
        if (vv > out.v) {
            out.v = vv;
            out.v_arg = i;
        }
    }
    return out;
}

Field heat_convolve(const Field& f, double s) {
    if (!(s >= 0.0)) throw std::invalid_argument("heat_convolve: s must be >= 0");
    if (s == 0.0) return f;
    const Grid& g = f.grid;
    Field cur = f;
    std::vector<double> line, out;
    for (int a = 0; a < g.dim; ++a) {
        const double dx = g.dx(a);
        const std::size_t m = static_cast<std::size_t>(g.n[a]);
        const auto rad =
            static_cast<std::ptrdiff_t>(std::ceil(8.0 * std::sqrt(2.0 * s) / dx)) + 1;
        // sampled Gaussian, mass-normalized so constants are preserved
        std::vector<double> w(2 * rad + 1);
        double sum = 0.0;
        for (std::ptrdiff_t j = -rad; j <= rad; ++j) {
            const double z = j * dx;
            w[j + rad] = std::exp(-z * z / (4.0 * s));
            sum += w[j + rad];
        }
        for (double& wi : w) wi /= sum;

        const bool periodic = g.boundary == Boundary::Periodic;
        std::vector<double> folded;
        if (periodic) {
            folded.assign(m, 0.0);
            for (std::ptrdiff_t j = -rad; j <= rad; ++j) {
                std::ptrdiff_t idx = j % static_cast<std::ptrdiff_t>(m);
                if (idx < 0) idx += static_cast<std::ptrdiff_t>(m);
                folded[static_cast<std::size_t>(idx)] += w[j + rad];
            }
        }

        line.resize(m);
        out.resize(m);
        for_each_line(g, a, [&](std::size_t base, std::size_t st, std::size_t mm) {
            for (std::size_t k = 0; k < mm; ++k) line[k] = cur.values[base + k * st];
            if (periodic) {
                for (std::size_t k = 0; k < mm; ++k) {
                    double acc = 0.0;
                    for (std::size_t j = 0; j < mm; ++j)
                        acc += folded[j] * line[(k + j) % mm];
                    out[k] = acc;
                }
            } else {
                for (std::size_t k = 0; k < mm; ++k) {
                    double acc = 0.0;
                    const auto kk = static_cast<std::ptrdiff_t>(k);
                    for (std::ptrdiff_t j = -rad; j <= rad; ++j) {
                        const std::ptrdiff_t q = kk + j;
                        if (q < 0 || q >= static_cast<std::ptrdiff_t>(mm)) continue;
                        acc += w[j + rad] * line[static_cast<std::size_t>(q)];
                    }
                    out[k] = acc;
                }
            }
            for (std::size_t k = 0; k < mm; ++k) cur.values[base + k * st] = out[k];
        });
    }
    return cur;
}

Field duhamel_v(const std::vector<std::pair<double, Field>>& u_history, const Field& v0,
                const Params& p, double t) {
    p.validate();
    if (!(t > 0.0)) throw std::invalid_argument("duhamel_v: t must be > 0");
    if (u_history.empty() || u_history.front().first > 1e-9 ||
        u_history.back().first < t - 1e-9)
        throw std::invalid_argument("duhamel_v: history must cover [0, t]");
    for (std::size_t i = 1; i < u_history.size(); ++i)
        if (!(u_history[i].first > u_history[i - 1].first))
            throw std::invalid_argument("duhamel_v: history times must increase");

    Field result = heat_convolve(v0, t);
    const double decay0 = std::exp(-p.lambda * t);
    for (double& r : result.values) r *= decay0;

    // trapezoid over the history nodes within [0, t]
    Field prev_integrand(v0.grid);
    double prev_s = 0.0;
    bool have_prev = false;
    for (const auto& [s_j, u_j] : u_history) {
        if (s_j > t + 1e-9) break;
        const double tau = t - s_j;
        Field integ = tau > 1e-14 ? heat_convolve(u_j, tau) : u_j;
        const double decay = std::exp(-p.lambda * tau);
        for (double& x : integ.values) x *= decay;
        if (have_prev) {
            const double h = s_j - prev_s;
            for (std::size_t i = 0; i < result.size(); ++i)
                result.values[i] +=
                    p.mu * 0.5 * h * (prev_integrand.values[i] + integ.values[i]);
        }
        prev_integrand = std::move(integ);
        prev_s = s_j;
        have_prev = true;
    }
    if (std::abs(prev_s - t) > 1e-9)
        throw std::invalid_argument("duhamel_v: history must include a sample at time t");
    return result;
}

std::pair<double, double> ball_extremes(const Field& f, double radius) {
    const Grid& g = f.grid;
    double lo = std::numeric_limits<double>::max();
    double hi = -lo;
    std::array<int, 3> ijk;
    std::array<double, 3> x;
    bool any = false;
    for (std::size_t i = 0; i < g.size(); ++i) {
        decompose(g, i, ijk);
        point(g, ijk, x);
        double r2 = 0.0;
        for (int a = 0; a < g.dim; ++a) r2 += x[a] * x[a];
        if (r2 > radius * radius) continue;
        any = true;
        lo = std::min(lo, f.values[i]);
        hi = std::max(hi, f.values[i]);
    }
    if (!any) throw std::invalid_argument("ball_extremes: no grid points inside the ball");
    return {lo, hi};
}

PersistenceReport persistence_check(const BallSignal& signal, double eta, double burn_in) {
    if (!(eta > 0.0)) throw std::invalid_argument("persistence_check: eta must be > 0");
    PersistenceReport rep;
    const std::size_t n = signal.times.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (!rep.triggered && signal.sup_u[i] >= eta) {
            rep.triggered = true;
            rep.trigger_time = signal.times[i];
        }
        if (!rep.established && signal.inf_u[i] >= eta) {
            rep.established = true;
            rep.established_time = signal.times[i];
        }
    }
    if (!rep.established) return rep;
    rep.window_start = rep.established_time + burn_in;
    double dmin = std::numeric_limits<double>::max();
    bool any = false;
    for (std::size_t i = 0; i < n; ++i) {
        if (signal.times[i] < rep.window_start - 1e-12) continue;
        dmin = std::min(dmin, signal.inf_u[i]);
        any = true;
    }
    if (!any) {  // burn-in reaches past the trace; fall back to the last sample
        dmin = signal.inf_u.back();
        rep.window_start = signal.times.back();
    }
    rep.delta_meas = dmin;
    for (std::size_t i = 0; i < n; ++i) {
        if (signal.times[i] < rep.window_start - 1e-12) continue;
        if (signal.inf_u[i] < 0.5 * rep.delta_meas) rep.never_below_half = false;
    }
    return rep;
}

}  // namespace chemfront
