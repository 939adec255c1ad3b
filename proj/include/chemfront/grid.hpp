#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace chemfront {

enum class Boundary { Neumann, Periodic };

std::string to_string(Boundary b);
Boundary boundary_from_string(const std::string& s);

/// Uniform tensor grid on a box. Row-major storage, axis 0 slowest.
/// Neumann grids are vertex-centered (nodes include both endpoints,
/// dx = (hi-lo)/(n-1)); Periodic grids drop the duplicate endpoint
/// (dx = (hi-lo)/n).
struct Grid {
    int dim = 1;
    std::array<double, 3> lo{0.0, 0.0, 0.0};
    std::array<double, 3> hi{1.0, 0.0, 0.0};
    std::array<int, 3> n{2, 1, 1};
    Boundary boundary = Boundary::Neumann;

    static Grid line(double lo, double hi, int n, Boundary b = Boundary::Neumann);
    static Grid box(int dim, const std::array<double, 3>& lo, const std::array<double, 3>& hi,
                    const std::array<int, 3>& n, Boundary b = Boundary::Neumann);

    void validate() const;

    double dx(int axis) const {
        const int m = boundary == Boundary::Neumann ? n[axis] - 1 : n[axis];
        return (hi[axis] - lo[axis]) / m;
    }
    double min_dx() const;
    double coord(int axis, int i) const { return lo[axis] + i * dx(axis); }

    std::size_t size() const {
        std::size_t s = 1;
        for (int a = 0; a < dim; ++a) s *= static_cast<std::size_t>(n[a]);
        return s;
    }
    std::size_t stride(int axis) const {
        std::size_t s = 1;
        for (int a = axis + 1; a < dim; ++a) s *= static_cast<std::size_t>(n[a]);
        return s;
    }

    bool operator==(const Grid& o) const = default;
};

/// Scalar samples on a Grid. Value semantics; the grid is carried along.
struct Field {
    Grid grid;
    std::vector<double> values;

    Field() = default;
    explicit Field(const Grid& g, double fill = 0.0)
        : grid(g), values(g.size(), fill) {}

    double& operator[](std::size_t i) { return values[i]; }
    double operator[](std::size_t i) const { return values[i]; }
    std::size_t size() const { return values.size(); }

    bool all_finite() const;
    double max() const;
    double min() const;
};

/// One time slice of the coupled system.
struct State {
    Field u;
    Field v;
    double t = 0.0;

    void validate() const;
};

}  // namespace chemfront
