#pragma once

#include <array>

#include "chemfront/params.hpp"

namespace chemfront::theory {

/// Spreading speed 2*sqrt(a) of the logistic reaction-diffusion equation.
double kpp_speed(double a);

/// Speed c(k) = (k^2 + a)/k of the exponential envelope M exp(-k(x.xi - c t)).
/// Minimized over k at k = sqrt(a) with value 2*sqrt(a).
double envelope_speed(double k, double a);

/// Minimal reduced growth rate abar in (0, a) with
/// 4*abar - c^2 >= eps*sqrt(a) for every |c| <= 2*sqrt(a) - eps.
double reduced_growth_rate(double eps, double a);

/// Half-width l = 2*pi*sqrt(dim) / sqrt(eps*sqrt(a)) of the box on which the
/// drifted Dirichlet problem has a positive principal eigenvalue.
double eigen_box_halfwidth(double eps, double a, int dim);

/// Principal eigenvalue (4*abar - c^2 - dim*pi^2/l^2) / 4 of
///   lap(phi) + c xi.grad(phi) + abar phi = lambda phi   on {|x_i| < l},
///   phi = 0 on the boundary.
/// Bounded below by 3*eps*sqrt(a)/16 for admissible c.
double principal_eigenvalue(double c, double abar, double eps, double a, int dim);

/// Floor 3*eps*sqrt(a)/16 attained by principal_eigenvalue at
/// c = +-(2*sqrt(a) - eps) with the minimal abar.
double eigenvalue_floor(double eps, double a);

/// Positive principal eigenfunction
///   phi(x) = exp(-(c/2) xi.x) * prod_i cos(pi x_i / (2 l)),
/// zero on the boundary of the box {|x_i| < l}. Throws outside the closed box.
double principal_eigenfunction(const std::array<double, 3>& x, const std::array<double, 3>& xi,
                               double c, double eps, double a, int dim);

/// Smallest T >= 1 with exp(-lambda T) * bound <= eta.
double persistence_time(double eta, double bound, double lambda);

/// Gaussian tail integral over the exterior of the origin ball of radius r:
///   moment 0:  int_{|z| > r} exp(-|z|^2) dz
///   moment 1:  int_{|z| > r} |z| exp(-|z|^2) dz
/// evaluated in radial form by adaptive quadrature (rel. tol. 1e-10).
/// r <= 0 integrates over all of R^dim.
double gaussian_tail(int dim, double r, int moment);

/// Smallest L >= ell*sqrt(dim) (so the ball of radius L contains the box of
/// half-width ell) such that both Gaussian tails beyond radius
/// R = (L - 4 T sqrt(a)) / (2 sqrt(2 T)) are <= eta. Bisection to 1e-9 on L.
double persistence_radius(double eta, double T, double a, int dim, double ell);

/// Bound tilde-M on the chemical response: if u stays below eta near a ball,
/// v and |grad v| stay below tilde-M * eta there after the waiting time.
///   max{ 1 + mu*bound/(lambda pi^(dim/2)) + mu/lambda,
///        1 + mu pi^(-dim/2) lambda^(-1/2) sqrt(pi) (bound + 1) }
double chemical_response_bound(double bound, double lambda, double mu, int dim);

/// Minimal admissible amplitude d = mu*bound/(a + lambda) for the chemical
/// envelope d exp(-k(x.xi - c t)).
double envelope_v_amplitude(double bound, double a, double mu, double lambda);

/// All closed-form constants for one (Params, eps) pair.
struct TheoryBundle {
    Params params;
    double eps = 0.0;
    double abar = 0.0;
    double ell = 0.0;
    double lambda_floor = 0.0;
    double kpp = 0.0;

    TheoryBundle(const Params& p, double eps);

    double lambda_of(double c) const;
    double t_of_eta(double eta, double bound) const;   // uses params.lambda
    double l_of_eta(double eta, double bound) const;   // persistence_radius at t_of_eta
    double response_bound(double bound) const;
    double envelope_v(double bound) const;
};

}  // namespace chemfront::theory
