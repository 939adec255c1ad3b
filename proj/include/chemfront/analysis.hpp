#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "chemfront/grid.hpp"
#include "chemfront/params.hpp"

namespace chemfront {

struct front_not_found : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Level-set positions of one front over time.
struct FrontTrace {
    double threshold = 0.0;
    std::string direction;  // "+e0", "-e0" or "radial"
    std::vector<double> times;
    std::vector<double> positions;
    std::vector<char> trusted;  // cleared once the clearance margin is violated
};

struct SpeedFit {
    double speed = 0.0;
    double intercept = 0.0;
    double t_begin = 0.0;
    double t_end = 0.0;
    double residual_rms = 0.0;
    std::size_t count = 0;
};

/// Rightmost (direction=+1) or leftmost (direction=-1) linearly interpolated
/// crossing of u = threshold along axis 0 of a 1d field.
/// Throws front_not_found when the level is never attained.
double front_position(const Field& u, double threshold, int direction = +1);

/// Max of u over spherical shells of width dx (2d radial reduction).
std::vector<double> radial_max_profile(const Field& u);

/// Outermost interpolated crossing of the radial max profile.
double front_position_radial(const Field& u, double threshold);

/// Ordinary least squares over the trailing fraction of the trusted part of
/// the trace. Throws std::invalid_argument with fewer than 5 samples.
SpeedFit fit_speed(const FrontTrace& trace, double window_fraction = 0.5);

enum class RegionShape { Ball, HalfSpace, Slab };

struct RegionReport {
    double u = 0.0;
    double v = 0.0;
    bool region_empty = false;      // fell back to the point nearest the origin
    bool exceeds_trusted = false;   // region reaches beyond the trusted radius
};

/// inf of u and v over the interior region of radius cone_speed * t:
/// Ball {|x| <= r}, HalfSpace {x.xi <= r}, Slab {|x.xi| <= r}.
RegionReport interior_infimum(const State& s, double cone_speed,
                              RegionShape shape = RegionShape::Ball,
                              const std::array<double, 3>& xi = {1, 0, 0});

/// sup of u and v over the exterior region {|x| >= cone_speed * t} (or the
/// directional variants). trusted_radius flags regions reaching past the
/// clearance margin.
RegionReport exterior_supremum(const State& s, double cone_speed,
                               RegionShape shape = RegionShape::Ball,
                               const std::array<double, 3>& xi = {1, 0, 0},
                               double trusted_radius = 0.0);

/// w = u + (chi/(2 mu)) |grad v|^2, the quantity obeying w_t <= lap(w) + a w
/// whenever b > dim*mu*chi/4.
Field w_functional(const State& s, const Params& p);

/// Discrete residual r = (w(t+dt) - w(t))/dt - lap_h(wbar) - a*wbar with wbar
/// the midpoint average. Under the damping condition the continuum bound is
/// r <= 0, so max(r) should not exceed the discretization tolerance.
/// flip_damping_term adds 2*(b - dim*mu*chi/4)*ubar^2, the negative control.
Field supersolution_residual(const State& at, const State& next, const Params& p,
                             bool flip_damping_term = false);

struct EnvelopeParams {
    double k = 0.5;
    double amplitude_u = 0.0;  // M
    double amplitude_v = 0.0;  // d
    std::array<double, 3> xi{1, 0, 0};
    bool two_sided = false;
};

/// Minimal amplitudes so the initial data sits below the exponential
/// envelopes: M covers w0 = u0 + (chi/2mu)|grad v0|^2 and, via
/// d = mu*M/(a+lambda), also v0.
EnvelopeParams fit_envelope(const State& initial, const Params& p, double k,
                            const std::array<double, 3>& xi, bool two_sided);

struct EnvelopeViolation {
    double u = 0.0;           // max over grid of w - envelope_u (>0 means violated)
    double v = 0.0;           // max over grid of v - envelope_v
    std::size_t u_arg = 0;
    std::size_t v_arg = 0;
};

/// Pointwise comparison of w and v against M e^{-k(x.xi - c t)} and
/// d e^{-k(x.xi - c t)} (two-sided: the min with the mirrored envelope),
/// where c = (k^2 + a)/k.
EnvelopeViolation envelope_violation(const State& s, const Params& p, const EnvelopeParams& env);

/// Heat semigroup applied to a field: discrete Gaussian convolution,
/// separable per axis; wraps on Periodic grids, free-space on Neumann
/// (the data must then be supported well inside the box).
Field heat_convolve(const Field& f, double s);

/// Variation-of-constants reconstruction of v at time t from v0 and the
/// sampled u history (ascending times covering [0, t], last sample at t):
///   v(t) = e^{-lambda t} G_t * v0
///        + mu * int_0^t e^{-lambda (t-s)} G_{t-s} * u(s) ds
/// with trapezoid quadrature on the history nodes.
Field duhamel_v(const std::vector<std::pair<double, Field>>& u_history, const Field& v0,
                const Params& p, double t);

/// (inf, sup) of f over the grid points with |x| <= radius.
std::pair<double, double> ball_extremes(const Field& f, double radius);

/// Per-sample extremes of u over the ball {|x| <= radius}.
struct BallSignal {
    double radius = 0.0;
    std::vector<double> times;
    std::vector<double> sup_u;
    std::vector<double> inf_u;
};

struct PersistenceReport {
    bool triggered = false;        // sup over ball reached eta
    double trigger_time = 0.0;     // first sample with sup >= eta
    bool established = false;      // inf over ball reached eta
    double established_time = 0.0;
    double window_start = 0.0;     // established_time + burn_in
    double delta_meas = 0.0;       // inf over [window_start, end]
    bool never_below_half = true;  // per-time inf >= delta_meas/2 on the window
};

/// Once the ball has been colonized to level eta and a burn-in has elapsed,
/// the infimum over the ball should stay bounded away from zero. Reports the
/// measured floor and whether the running infimum ever dipped below half of it.
PersistenceReport persistence_check(const BallSignal& signal, double eta, double burn_in);

}  // namespace chemfront
