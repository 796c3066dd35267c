#include "rlab/endpoint.hpp"

#include <cmath>

#include "rlab/norms.hpp"
#include "rlab/quadrature.hpp"
#include "rlab/resolvent.hpp"
#include "rlab/sphere.hpp"

namespace rlab {

namespace {

constexpr double kLambdaCut = 40.0;  // far beyond the poles at |lambda| <= (1+eps^2)^(1/4)
constexpr int kSphereNodes = 512;

void require_midbox(const Field& f, const char* what) {
    if (f.domain != Domain::Position)
        throw std::invalid_argument(std::string(what) + ": need a position-domain field");
    if (!(lp_norm(f, 1) > 0.0)) throw std::invalid_argument(std::string(what) + ": zero field");
    if (l1_fraction_outside_middle_half(f) > 0.02)
        throw std::invalid_argument(std::string(what) +
                                    ": field not supported in the middle half of the box");
}

void require_eps_ladder(const std::vector<double>& eps_sequence, double length,
                        const char* what) {
    if (eps_sequence.empty())
        throw std::invalid_argument(std::string(what) + ": empty eps sequence");
    for (double e : eps_sequence)
        if (!(e >= 4.0 / length - 1e-12))
            throw std::invalid_argument(std::string(what) +
                                        ": eps below the 4/L image-suppression floor");
}

}  // namespace

cplx m_eps_hat(double tau, double eps) {
    if (!(eps > 0)) throw std::invalid_argument("m_eps_hat: need eps > 0");
    cplx w = std::sqrt(cplx(1.0, eps));
    cplx t = w * std::exp(cplx(0.0, std::abs(tau)) * w);
    return kPi / (2.0 * eps) * (t + std::conj(t));
}

cplx m_eps_hat_oracle(double tau, double eps) {
    if (!(eps > 0)) throw std::invalid_argument("m_eps_hat_oracle: need eps > 0");
    tau = std::abs(tau);
    const cplx z(1.0, eps), zbar(1.0, -eps);
    auto mult = [&](cplx lam) {
        cplx l2 = lam * lam;
        return l2 / ((l2 - z) * (l2 - zbar));
    };
    double tol = 1e-9 * (1.0 + kPi / eps);
    // even integrand: [-cut, cut] collapses to twice the cosine integral
    cplx head = integrate(
        [&](double l) { return 2.0 * std::cos(l * tau) * mult(cplx(l, 0.0)); }, 0.0,
        kLambdaCut, tol);
    // |lambda| > cut: substitute lambda = cut + i t (s maps [0,1) onto t >= 0);
    // the e^{-i lambda tau} half is the complex conjugate, hence the 2 Re
    auto ray = [&](double s) {
        double t = kLambdaCut * s / (1.0 - s);
        double jac = kLambdaCut / ((1.0 - s) * (1.0 - s));
        return mult(cplx(kLambdaCut, t)) * std::exp(-t * tau) * jac;
    };
    cplx ray_int = integrate(ray, 0.0, 1.0 - 1e-9, tol);
    double tail = 2.0 * std::real(cplx(0.0, 1.0) * std::exp(cplx(0.0, kLambdaCut * tau)) *
                                  ray_int);
    return cplx(head.real() + tail, 0.0);
}

double g_identity_check(const Field& f, double eps) {
    require_midbox(f, "g_identity_check");
    if (!(eps >= 4.0 / f.grid.length - 1e-12))
        throw std::invalid_argument("g_identity_check: need eps >= 4/L");
    SphereQuadrature quad = sphere_quadrature(kSphereNodes);
    double trace = sphere_l2(restrict(f, 1.0, quad));
    double g1 = 4.0 * kPi * trace * trace;
    Field u = apply_free_resolvent(f, spectral_param(1.0, eps, +1));
    double l2 = lp_norm(u, 2);
    double l1 = lp_norm(f, 1);
    return std::abs(l2 * l2 - g1 / (16.0 * kPi * kPi * eps)) / (l1 * l1 / (8.0 * kPi));
}

std::vector<double> endpoint_ratios(const Field& f, const std::vector<double>& eps_sequence) {
    require_midbox(f, "endpoint_ratios");
    require_eps_ladder(eps_sequence, f.grid.length, "endpoint_ratios");
    SphereQuadrature quad = sphere_quadrature(kSphereNodes);
    double trace = sphere_l2(restrict(f, 1.0, quad));
    if (trace > 1e-6 * lp_norm(f, 2))
        throw std::invalid_argument(
            "endpoint_ratios: transform of f does not vanish on the unit sphere");
    double l1 = lp_norm(f, 1);
    std::vector<double> out;
    out.reserve(eps_sequence.size());
    for (double e : eps_sequence) {
        double r = 0.0;
        for (int sign : {+1, -1})
            r = std::max(r, lp_norm(apply_free_resolvent(f, spectral_param(1.0, e, sign)), 2));
        out.push_back(r / l1);
    }
    return out;
}

double endpoint_bound_check(const Field& f, const std::vector<double>& eps_sequence) {
    double best = 0.0;
    for (double r : endpoint_ratios(f, eps_sequence)) best = std::max(best, r);
    return best;
}

}  // namespace rlab
