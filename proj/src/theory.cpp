#include "chemfront/theory.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace chemfront::theory {

namespace {

constexpr double kPi = std::numbers::pi;

void check_eps(double eps, double a) {
    if (!(a > 0.0)) throw std::domain_error("growth rate a must be > 0");
    if (!(eps > 0.0 && eps < std::sqrt(a)))
        throw std::domain_error("speed margin eps must lie in (0, sqrt(a))");
}

// Adaptive Simpson on [a,b] with absolute tolerance tol.
template <typename F>
double adaptive_simpson(const F& f, double a, double b, double fa, double fm, double fb,
                        double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    // second guard: stop when roundoff makes the requested tolerance unreachable
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol ||
        std::abs(delta) <= 1e-13 * (std::abs(left) + std::abs(right)))
        return left + right + delta / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

template <typename F>
double integrate(const F& f, double a, double b, double rel_tol) {
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    if (whole == 0.0) return 0.0;
    return adaptive_simpson(f, a, b, fa, fm, fb, whole, rel_tol * std::abs(whole), 30);
}

}  // namespace

double kpp_speed(double a) {
    if (!(a > 0.0)) throw std::domain_error("kpp_speed: a must be > 0");
    return 2.0 * std::sqrt(a);
}

double envelope_speed(double k, double a) {
    if (!(k > 0.0)) throw std::domain_error("envelope_speed: k must be > 0");
    if (!(a > 0.0)) throw std::domain_error("envelope_speed: a must be > 0");
    return (k * k + a) / k;
}

double reduced_growth_rate(double eps, double a) {
    check_eps(eps, a);
    const double cmax = 2.0 * std::sqrt(a) - eps;
    const double abar = (cmax * cmax + eps * std::sqrt(a)) / 4.0;
    return abar;  // always in (0, a) for eps in (0, sqrt(a))
}

double eigen_box_halfwidth(double eps, double a, int dim) {
    check_eps(eps, a);
    if (dim < 1 || dim > 3) throw std::domain_error("eigen_box_halfwidth: dim must be 1..3");
    return 2.0 * kPi * std::sqrt(static_cast<double>(dim)) / std::sqrt(eps * std::sqrt(a));
}

double principal_eigenvalue(double c, double abar, double eps, double a, int dim) {
    check_eps(eps, a);
    if (std::abs(c) > 2.0 * std::sqrt(a) - eps)
        throw std::domain_error("principal_eigenvalue: |c| must be <= 2*sqrt(a) - eps");
    const double l = eigen_box_halfwidth(eps, a, dim);
    return (4.0 * abar - c * c - dim * kPi * kPi / (l * l)) / 4.0;
}

double eigenvalue_floor(double eps, double a) {
    check_eps(eps, a);
    return 3.0 * eps * std::sqrt(a) / 16.0;
}

double principal_eigenfunction(const std::array<double, 3>& x, const std::array<double, 3>& xi,
                               double c, double eps, double a, int dim) {
    const double l = eigen_box_halfwidth(eps, a, dim);
    double norm2 = 0.0;
    for (int i = 0; i < dim; ++i) norm2 += xi[i] * xi[i];
    if (std::abs(norm2 - 1.0) > 1e-12)
        throw std::invalid_argument("principal_eigenfunction: xi must be a unit vector");
    double dot = 0.0;
    double prod = 1.0;
    for (int i = 0; i < dim; ++i) {
        if (std::abs(x[i]) > l)
            throw std::domain_error("principal_eigenfunction: point outside the closed box");
        dot += xi[i] * x[i];
        prod *= std::cos(kPi * x[i] / (2.0 * l));
    }
    return std::exp(-0.5 * c * dot) * prod;
}

double persistence_time(double eta, double bound, double lambda) {
    if (!(eta > 0.0 && bound > 0.0 && lambda > 0.0))
        throw std::domain_error("persistence_time: inputs must be positive");
    return std::max(1.0, std::log(bound / eta) / lambda);
}

double gaussian_tail(int dim, double r, int moment) {
    if (dim < 1 || dim > 3) throw std::domain_error("gaussian_tail: dim must be 1..3");
    if (moment != 0 && moment != 1) throw std::domain_error("gaussian_tail: moment must be 0 or 1");
    const double r0 = std::max(r, 0.0);
    const double p = dim - 1 + moment;
    const auto integrand = [p](double s) { return std::pow(s, p) * std::exp(-s * s); };
    const double surface = 2.0 * std::pow(kPi, dim / 2.0) / std::tgamma(dim / 2.0);
    return surface * integrate(integrand, r0, r0 + 12.0, 1e-10);
}

double persistence_radius(double eta, double T, double a, int dim, double ell) {
    if (!(eta > 0.0)) throw std::domain_error("persistence_radius: eta must be > 0");
    if (!(T >= 1.0)) throw std::domain_error("persistence_radius: T must be >= 1");
    if (!(a > 0.0)) throw std::domain_error("persistence_radius: a must be > 0");
    if (!(ell > 0.0)) throw std::domain_error("persistence_radius: ell must be > 0");
    if (dim < 1 || dim > 3) throw std::domain_error("persistence_radius: dim must be 1..3");

    const auto ok = [&](double L) {
        const double R = (L - 4.0 * T * std::sqrt(a)) / (2.0 * std::sqrt(2.0 * T));
        return gaussian_tail(dim, R, 0) <= eta && gaussian_tail(dim, R, 1) <= eta;
    };

    const double lmin = ell * std::sqrt(static_cast<double>(dim));  // ball contains the box
    if (ok(lmin)) return lmin;
    double lo = lmin;
    double hi = lmin;
    while (!ok(hi)) hi = 2.0 * hi + 1.0;
    while (hi - lo > 1e-9) {
        const double mid = 0.5 * (lo + hi);
        (ok(mid) ? hi : lo) = mid;
    }
    return hi;
}

double chemical_response_bound(double bound, double lambda, double mu, int dim) {
    if (!(bound > 0.0 && lambda > 0.0 && mu > 0.0))
        throw std::domain_error("chemical_response_bound: inputs must be positive");
    if (dim < 1 || dim > 3) throw std::domain_error("chemical_response_bound: dim must be 1..3");
    const double pih = std::pow(kPi, dim / 2.0);
    const double first = 1.0 + mu * bound / (lambda * pih) + mu / lambda;
    const double g_half = std::sqrt(kPi);  // Gamma(1/2)
    const double second = 1.0 + mu / pih / std::sqrt(lambda) * g_half * (bound + 1.0);
    return std::max(first, second);
}

double envelope_v_amplitude(double bound, double a, double mu, double lambda) {
    if (!(bound > 0.0 && a > 0.0 && mu > 0.0 && lambda > 0.0))
        throw std::domain_error("envelope_v_amplitude: inputs must be positive");
    return mu * bound / (a + lambda);
}

TheoryBundle::TheoryBundle(const Params& p, double eps_in) : params(p), eps(eps_in) {
    params.validate();
    check_eps(eps, params.a);
    abar = reduced_growth_rate(eps, params.a);
    ell = eigen_box_halfwidth(eps, params.a, params.dim);
    lambda_floor = eigenvalue_floor(eps, params.a);
    kpp = kpp_speed(params.a);
}

double TheoryBundle::lambda_of(double c) const {
    return principal_eigenvalue(c, abar, eps, params.a, params.dim);
}

double TheoryBundle::t_of_eta(double eta, double bound) const {
    return persistence_time(eta, bound, params.lambda);
}

double TheoryBundle::l_of_eta(double eta, double bound) const {
    return persistence_radius(eta, t_of_eta(eta, bound), params.a, params.dim, ell);
}

double TheoryBundle::response_bound(double bound) const {
    return chemical_response_bound(bound, params.lambda, params.mu, params.dim);
}

double TheoryBundle::envelope_v(double bound) const {
    return envelope_v_amplitude(bound, params.a, params.mu, params.lambda);
}

}  // namespace chemfront::theory
