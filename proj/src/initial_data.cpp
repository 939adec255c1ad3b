#include "chemfront/initial_data.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "chemfront/snapshot_io.hpp"

namespace chemfront {

std::string to_string(InitialDataKind k) {
    switch (k) {
        case InitialDataKind::CompactBump: return "compact_bump";
        case InitialDataKind::FrontLike: return "front_like";
        case InitialDataKind::TwoSided: return "two_sided";
        case InitialDataKind::Custom: return "custom";
    }
    return "?";
}

InitialDataKind initial_kind_from_string(const std::string& s) {
    if (s == "compact_bump") return InitialDataKind::CompactBump;
    if (s == "front_like") return InitialDataKind::FrontLike;
    if (s == "two_sided") return InitialDataKind::TwoSided;
    if (s == "custom") return InitialDataKind::Custom;
    throw std::invalid_argument("unknown initial data kind: " + s);
}

double smooth_cutoff(double s) {
    if (s <= -1.0) return 1.0;
    if (s >= 1.0) return 0.0;
    const double x = 0.5 * (s + 1.0);
    return 1.0 - x * x * x * (10.0 + x * (-15.0 + 6.0 * x));
}

namespace {

void check_direction(const InitialDataSpec& spec, int dim) {
    double n2 = 0.0;
    for (int a = 0; a < dim; ++a) n2 += spec.direction[a] * spec.direction[a];
    if (std::abs(n2 - 1.0) > 1e-12)
        throw std::invalid_argument("initial data: direction must be a unit vector");
}

Field shape_field(const Grid& g, const InitialDataSpec& spec, double amplitude) {
    Field f(g);
    std::array<int, 3> ijk{0, 0, 0};
    for (std::size_t idx = 0; idx < g.size(); ++idx) {
        std::size_t rest = idx;
        for (int a = g.dim - 1; a >= 0; --a) {
            ijk[a] = static_cast<int>(rest % static_cast<std::size_t>(g.n[a]));
            rest /= static_cast<std::size_t>(g.n[a]);
        }
        double r2 = 0.0, proj = 0.0;
        for (int a = 0; a < g.dim; ++a) {
            const double x = g.coord(a, ijk[a]);
            r2 += x * x;
            proj += x * spec.direction[a];
        }
        double val = 0.0;
        switch (spec.kind) {
            case InitialDataKind::CompactBump: {
                const double q = 1.0 - r2 / (spec.radius * spec.radius);
                val = q > 0.0 ? amplitude * q * q : 0.0;
                break;
            }
            case InitialDataKind::FrontLike:
                val = amplitude * smooth_cutoff((proj - spec.interface_pos) / spec.width);
                break;
            case InitialDataKind::TwoSided:
                val = amplitude * smooth_cutoff((proj - spec.radius) / spec.width) *
                      smooth_cutoff((-proj - spec.radius) / spec.width);
                break;
            case InitialDataKind::Custom: break;  // handled by the caller
        }
        f.values[idx] = val;
    }
    return f;
}

}  // namespace

State build_initial(const InitialDataSpec& spec, const Grid& grid, double clearance_fraction) {
    grid.validate();
    State s;
    s.t = 0.0;
    if (spec.kind == InitialDataKind::Custom) {
        if (spec.u_file.empty() || spec.v_file.empty())
            throw std::invalid_argument("initial data: custom kind needs u_file and v_file");
        auto [u, tu] = read_field(spec.u_file);
        auto [v, tv] = read_field(spec.v_file);
        (void)tu;
        (void)tv;
        if (!(u.grid == grid) || !(v.grid == grid))
            throw std::invalid_argument("initial data: custom fields live on a different grid");
        s.u = std::move(u);
        s.v = std::move(v);
        s.validate();
        return s;
    }

    if (!(spec.amplitude > 0.0) || !(spec.v_amplitude >= 0.0))
        throw std::invalid_argument("initial data: amplitudes must be positive");
    if (!(spec.width > 0.0)) throw std::invalid_argument("initial data: width must be > 0");
    check_direction(spec, grid.dim);

    // The decaying edge of the support must respect the clearance margin.
    if (spec.kind == InitialDataKind::CompactBump) {
        for (int a = 0; a < grid.dim; ++a) {
            const double margin = clearance_fraction * (grid.hi[a] - grid.lo[a]);
            if (spec.radius > grid.hi[a] - margin || -spec.radius < grid.lo[a] + margin)
                throw std::invalid_argument("initial data: support exceeds the clearance margin");
        }
    } else {
        // projection extent of the box along the data direction
        double pmin = 0.0, pmax = 0.0;
        for (int a = 0; a < grid.dim; ++a) {
            const double lo = grid.lo[a] * spec.direction[a];
            const double hi = grid.hi[a] * spec.direction[a];
            pmin += std::min(lo, hi);
            pmax += std::max(lo, hi);
        }
        const double pmargin = clearance_fraction * (pmax - pmin);
        const bool two_sided = spec.kind == InitialDataKind::TwoSided;
        const double edge =
            two_sided ? spec.radius + spec.width : spec.interface_pos + spec.width;
        if (edge > pmax - pmargin || (two_sided && -edge < pmin + pmargin))
            throw std::invalid_argument("initial data: support exceeds the clearance margin");
    }

    s.u = shape_field(grid, spec, spec.amplitude);
    s.v = shape_field(grid, spec, spec.v_amplitude);
    if (s.u.max() <= 0.0)
        throw std::invalid_argument("initial data: u support is empty on this grid");
    s.validate();
    return s;
}

namespace {

// range of x.xi over the box corners, shared by the class predicates
void proj_range(const Field& f, const std::array<double, 3>& xi, double& pmin, double& pmax) {
    const Grid& g = f.grid;
    pmin = 0.0;
    pmax = 0.0;
    for (int a = 0; a < g.dim; ++a) {
        const double lo = g.lo[a] * xi[a];
        const double hi = g.hi[a] * xi[a];
        pmin += std::min(lo, hi);
        pmax += std::max(lo, hi);
    }
}

template <typename Pred>
double min_over(const Field& f, const std::array<double, 3>& xi, Pred in_region) {
    const Grid& g = f.grid;
    double m = std::numeric_limits<double>::max();
    std::array<int, 3> ijk{0, 0, 0};
    bool any = false;
    for (std::size_t idx = 0; idx < g.size(); ++idx) {
        std::size_t rest = idx;
        for (int a = g.dim - 1; a >= 0; --a) {
            ijk[a] = static_cast<int>(rest % static_cast<std::size_t>(g.n[a]));
            rest /= static_cast<std::size_t>(g.n[a]);
        }
        double proj = 0.0, r2 = 0.0;
        for (int a = 0; a < g.dim; ++a) {
            const double x = g.coord(a, ijk[a]);
            proj += x * xi[a];
            r2 += x * x;
        }
        if (!in_region(proj, std::sqrt(r2))) continue;
        any = true;
        m = std::min(m, f.values[idx]);
    }
    return any ? m : std::numeric_limits<double>::quiet_NaN();
}

template <typename Pred>
double max_over(const Field& f, const std::array<double, 3>& xi, Pred in_region) {
    const Grid& g = f.grid;
    double m = -std::numeric_limits<double>::max();
    std::array<int, 3> ijk{0, 0, 0};
    bool any = false;
    for (std::size_t idx = 0; idx < g.size(); ++idx) {
        std::size_t rest = idx;
        for (int a = g.dim - 1; a >= 0; --a) {
            ijk[a] = static_cast<int>(rest % static_cast<std::size_t>(g.n[a]));
            rest /= static_cast<std::size_t>(g.n[a]);
        }
        double proj = 0.0, r2 = 0.0;
        for (int a = 0; a < g.dim; ++a) {
            const double x = g.coord(a, ijk[a]);
            proj += x * xi[a];
            r2 += x * x;
        }
        if (!in_region(proj, std::sqrt(r2))) continue;
        any = true;
        m = std::max(m, f.values[idx]);
    }
    return any ? m : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

bool is_compactly_supported(const Field& f, double clearance_fraction) {
    const Grid& g = f.grid;
    if (f.max() <= 0.0) return false;
    double trusted = std::numeric_limits<double>::max();
    for (int a = 0; a < g.dim; ++a) {
        const double margin = clearance_fraction * (g.hi[a] - g.lo[a]);
        trusted = std::min(trusted, std::min(g.hi[a] - margin, -(g.lo[a] + margin)));
    }
    const double outside =
        max_over(f, {1, 0, 0}, [&](double, double r) { return r > trusted; });
    return std::isnan(outside) || outside == 0.0;
}

bool is_front_like(const Field& f, const std::array<double, 3>& xi, double clearance_fraction) {
    double pmin, pmax;
    proj_range(f, xi, pmin, pmax);
    const double margin = clearance_fraction * (pmax - pmin);
    const double back =
        min_over(f, xi, [&](double p, double) { return p <= pmin + margin; });
    const double ahead =
        max_over(f, xi, [&](double p, double) { return p >= pmax - margin; });
    return back > 0.0 && ahead == 0.0;
}

bool is_two_sided(const Field& f, const std::array<double, 3>& xi, double clearance_fraction) {
    double pmin, pmax;
    proj_range(f, xi, pmin, pmax);
    const double margin = clearance_fraction * (pmax - pmin);
    const double span = 0.05 * (pmax - pmin);
    const double core =
        min_over(f, xi, [&](double p, double) { return std::abs(p) <= span; });
    const double left = max_over(f, xi, [&](double p, double) { return p <= pmin + margin; });
    const double right = max_over(f, xi, [&](double p, double) { return p >= pmax - margin; });
    return core > 0.0 && left == 0.0 && right == 0.0;
}

}  // namespace chemfront
