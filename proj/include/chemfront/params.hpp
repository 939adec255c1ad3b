#pragma once

#include <stdexcept>
#include <utility>

namespace chemfront {

/// Model constants of the coupled system
///   u_t = lap(u) - chi div(u grad v) + u(a - b u)
///   v_t = lap(v) - lambda v + mu u
/// on R^dim, truncated to a box by the harness.
struct Params {
    double chi = 0.0;     // chemotaxis sensitivity, >= 0
    double a = 1.0;       // intrinsic growth rate, > 0
    double b = 1.0;       // logistic damping, > 0
    double lambda = 1.0;  // chemical decay rate, > 0
    double mu = 1.0;      // chemical production rate, > 0
    int dim = 1;          // spatial dimension, 1..3

    void validate() const {
        if (!(chi >= 0.0)) throw std::invalid_argument("Params: chi must be >= 0");
        if (!(a > 0.0)) throw std::invalid_argument("Params: a must be > 0");
        if (!(b > 0.0)) throw std::invalid_argument("Params: b must be > 0");
        if (!(lambda > 0.0)) throw std::invalid_argument("Params: lambda must be > 0");
        if (!(mu > 0.0)) throw std::invalid_argument("Params: mu must be > 0");
        if (dim < 1 || dim > 3) throw std::invalid_argument("Params: dim must be 1, 2 or 3");
    }
};

/// True iff b > dim*mu*chi/4 (strict), the damping condition under which
/// the spreading speed equals 2*sqrt(a).
inline bool damping_condition(const Params& p) {
    return p.b > p.dim * p.mu * p.chi / 4.0;
}

/// The positive homogeneous steady state (a/b, mu*a/(lambda*b)).
inline std::pair<double, double> steady_state(const Params& p) {
    return {p.a / p.b, p.mu * p.a / (p.lambda * p.b)};
}

/// Same parameters with the chemotaxis switched off; the u-equation then
/// decouples into the Fisher-KPP equation (v is still evolved).
inline Params fisher_kpp_mode(Params p) {
    p.chi = 0.0;
    return p;
}

}  // namespace chemfront
