#include "chemfront/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace chemfront {

std::string to_string(Boundary b) {
    return b == Boundary::Neumann ? "neumann" : "periodic";
}

Boundary boundary_from_string(const std::string& s) {
    if (s == "neumann") return Boundary::Neumann;
    if (s == "periodic") return Boundary::Periodic;
    throw std::invalid_argument("unknown boundary kind: " + s);
}

Grid Grid::line(double lo, double hi, int n, Boundary b) {
    Grid g;
    g.dim = 1;
    g.lo = {lo, 0.0, 0.0};
    g.hi = {hi, 0.0, 0.0};
    g.n = {n, 1, 1};
    g.boundary = b;
    g.validate();
    return g;
}

Grid Grid::box(int dim, const std::array<double, 3>& lo, const std::array<double, 3>& hi,
               const std::array<int, 3>& n, Boundary b) {
    Grid g;
    g.dim = dim;
    g.lo = lo;
    g.hi = hi;
    g.n = n;
    for (int a = dim; a < 3; ++a) {
        g.lo[a] = 0.0;
        g.hi[a] = 0.0;
        g.n[a] = 1;
    }
    g.boundary = b;
    g.validate();
    return g;
}

void Grid::validate() const {
    if (dim < 1 || dim > 3) throw std::invalid_argument("Grid: dim must be 1, 2 or 3");
    for (int a = 0; a < dim; ++a) {
        if (!(hi[a] > lo[a])) throw std::invalid_argument("Grid: hi must exceed lo on every axis");
        if (n[a] < 8) throw std::invalid_argument("Grid: need at least 8 points per axis");
    }
}

double Grid::min_dx() const {
    double m = dx(0);
    for (int a = 1; a < dim; ++a) m = std::min(m, dx(a));
    return m;
}

bool Field::all_finite() const {
    for (double v : values)
        if (!std::isfinite(v)) return false;
    return true;
}

double Field::max() const {
    double m = values.empty() ? 0.0 : values[0];
    for (double v : values) m = std::max(m, v);
    return m;
}

double Field::min() const {
    double m = values.empty() ? 0.0 : values[0];
    for (double v : values) m = std::min(m, v);
    return m;
}

void State::validate() const {
    if (!(u.grid == v.grid)) throw std::invalid_argument("State: u and v live on different grids");
    if (!u.all_finite() || !v.all_finite())
        throw std::invalid_argument("State: fields contain non-finite values");
}

}  // namespace chemfront
