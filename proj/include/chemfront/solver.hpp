#pragma once

#include <array>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

#include "chemfront/grid.hpp"
#include "chemfront/params.hpp"
#include "chemfront/run_record.hpp"

namespace chemfront {

enum class DtPolicy { Fixed, AdaptiveCfl };
enum class FluxScheme { CentralConservative, UpwindConservative };
enum class DiffusionIntegrator { BackwardEuler, CrankNicolson };

std::string to_string(DtPolicy p);
std::string to_string(FluxScheme f);
std::string to_string(DiffusionIntegrator d);
DtPolicy dt_policy_from_string(const std::string& s);
FluxScheme flux_from_string(const std::string& s);
DiffusionIntegrator diffusion_from_string(const std::string& s);

/// IMEX scheme configuration: diffusion implicit (tridiagonal solve per axis,
/// axes composed sequentially), chemotaxis, reaction and frame advection
/// explicit.
struct SchemeConfig {
    double dt = 0.5;
    DtPolicy dt_policy = DtPolicy::AdaptiveCfl;
    double safety = 0.4;
    FluxScheme flux = FluxScheme::UpwindConservative;
    DiffusionIntegrator diffusion = DiffusionIntegrator::BackwardEuler;
    double frame_speed = 0.0;
    std::array<double, 3> frame_direction{1.0, 0.0, 0.0};
    double negativity_tol = 1e-10;

    void validate(int dim) const;
};

struct StepReport {
    double dt = 0.0;
    double max_u = 0.0;
    double max_v = 0.0;
    double max_grad_v = 0.0;
    double cfl_advective = 0.0;
    double cfl_chemotactic = 0.0;
    long clip_count = 0;
};

struct solver_error : std::runtime_error {
    double t;
    solver_error(const std::string& msg, double time) : std::runtime_error(msg), t(time) {}
};

/// Full discrete right-hand side of the u equation: centered Laplacian,
/// conservative chemotactic flux divergence, logistic term and (in a moving
/// frame) upwinded advection c xi.grad(u).
Field rhs_u(const State& s, const Params& p, const SchemeConfig& sc);

/// Discrete lap(v) - lambda v + mu u (+ frame advection).
Field rhs_v(const State& s, const Params& p, const SchemeConfig& sc);

/// Time step the adaptive policy would choose for this state (before any
/// cadence capping): safety * min(dx/(|c| + chi max|grad v|), 1/(2a)).
double stable_dt(const State& s, const Params& p, const SchemeConfig& sc);

/// Advance the state by one IMEX step of at most dt_cap. Throws solver_error
/// on NaN/Inf or negativity beyond tolerance; clips tiny undershoots to zero.
StepReport step(State& s, const Params& p, const SchemeConfig& sc,
                double dt_cap = std::numeric_limits<double>::infinity());

struct ObserverConfig {
    double cadence = 0.5;
    std::vector<double> thresholds;       // absolute u levels to track
    double clearance_fraction = 0.1;      // front must stay this far from the boundary
    bool track_fronts = true;
};

/// Sample delivered to the hook at every cadence point: the state at the
/// sample time and (when the run continues) the state one step later, for
/// residual-type monitors.
struct SamplePair {
    const State* at = nullptr;
    const State* next = nullptr;  // null at the final sample
    double dt = 0.0;
};
using SampleHook = std::function<void(std::size_t index, const SamplePair&)>;

/// Iterate step() to the horizon, sampling observers at the configured
/// cadence (front tracker, invariant monitors, the caller's hook). Numerical
/// failures are recorded in the returned record's termination field.
RunRecord run(State initial, const Params& p, const SchemeConfig& sc, double horizon,
              const ObserverConfig& obs, const SampleHook& hook = {});

}  // namespace chemfront
