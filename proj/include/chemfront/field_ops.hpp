#pragma once

#include "chemfront/grid.hpp"

namespace chemfront {

// Second-order centered stencils. Neumann boundaries use mirror ghosts
// (which encodes the homogeneous Neumann condition), Periodic wraps.

Field laplacian(const Field& f);
Field gradient(const Field& f, int axis);

/// |grad f|^2 with centered differences.
Field grad_magnitude_sq(const Field& f);

/// max_i |grad f|(i), from centered differences.
double max_grad_norm(const Field& f);

/// sum of values times the cell volume dx^dim (uniform weights).
double mass(const Field& f);

double linf_diff(const Field& a, const Field& b);

/// Visits every grid line along `axis` as (base, stride, count).
template <typename F>
void for_each_line(const Grid& g, int axis, F&& fn) {
    const std::size_t m = static_cast<std::size_t>(g.n[axis]);
    const std::size_t s = g.stride(axis);
    const std::size_t inner = s;
    const std::size_t outer = g.size() / (m * s);
    for (std::size_t o = 0; o < outer; ++o)
        for (std::size_t i = 0; i < inner; ++i) fn(o * m * s + i, s, m);
}

}  // namespace chemfront
