#include "chemfront/field_ops.hpp"

#include <cmath>
#include <stdexcept>

namespace chemfront {

namespace {

// Neighbor offsets along one line with the grid's boundary rule.
// k is the in-line position, m the line length. Returns the in-line
// index of the neighbor at k+d (d = +1/-1).
inline std::size_t line_neighbor(std::size_t k, int d, std::size_t m, Boundary b) {
    if (b == Boundary::Periodic) return (k + m + static_cast<std::size_t>(d)) % m;
    // mirror ghost: u_{-1} = u_1, u_{m} = u_{m-2}
    if (d > 0) return k + 1 < m ? k + 1 : m - 2;
    return k > 0 ? k - 1 : 1;
}

}  // namespace

Field laplacian(const Field& f) {
    const Grid& g = f.grid;
    Field out(g);
    for (int a = 0; a < g.dim; ++a) {
        const double inv_dx2 = 1.0 / (g.dx(a) * g.dx(a));
        for_each_line(g, a, [&](std::size_t base, std::size_t s, std::size_t m) {
            for (std::size_t k = 0; k < m; ++k) {
                const std::size_t il = base + line_neighbor(k, -1, m, g.boundary) * s;
                const std::size_t ir = base + line_neighbor(k, +1, m, g.boundary) * s;
                const std::size_t i = base + k * s;
                out.values[i] += (f.values[il] - 2.0 * f.values[i] + f.values[ir]) * inv_dx2;
            }
        });
    }
    return out;
}

Field gradient(const Field& f, int axis) {
    const Grid& g = f.grid;
    if (axis < 0 || axis >= g.dim) throw std::invalid_argument("gradient: bad axis");
    Field out(g);
    const double inv_2dx = 0.5 / g.dx(axis);
    for_each_line(g, axis, [&](std::size_t base, std::size_t s, std::size_t m) {
        for (std::size_t k = 0; k < m; ++k) {
            const std::size_t il = base + line_neighbor(k, -1, m, g.boundary) * s;
            const std::size_t ir = base + line_neighbor(k, +1, m, g.boundary) * s;
            out.values[base + k * s] = (f.values[ir] - f.values[il]) * inv_2dx;
        }
    });
    return out;
}

Field grad_magnitude_sq(const Field& f) {
    Field out(f.grid);
    for (int a = 0; a < f.grid.dim; ++a) {
        Field ga = gradient(f, a);
        for (std::size_t i = 0; i < out.size(); ++i) out.values[i] += ga.values[i] * ga.values[i];
    }
    return out;
}

double max_grad_norm(const Field& f) {
    Field g2 = grad_magnitude_sq(f);
    return std::sqrt(g2.max());
}

double mass(const Field& f) {
    double cell = 1.0;
    for (int a = 0; a < f.grid.dim; ++a) cell *= f.grid.dx(a);
    double s = 0.0;
    for (double v : f.values) s += v;
    return s * cell;
}

double linf_diff(const Field& a, const Field& b) {
    if (a.size() != b.size()) throw std::invalid_argument("linf_diff: size mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.values[i] - b.values[i]));
    return m;
}

}  // namespace chemfront
