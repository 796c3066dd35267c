#include "rlab/sphere.hpp"

#include <cmath>

#include "rlab/fft.hpp"
#include "rlab/norms.hpp"
#include "rlab/resolvent.hpp"

namespace rlab {

SphereQuadrature sphere_quadrature(int m) {
    if (m < 64) throw std::invalid_argument("sphere_quadrature: need m >= 64 nodes");
    SphereQuadrature q;
    q.nodes.resize(m);
    q.weights.assign(m, 1.0 / m);
    const double golden_angle = kPi * (3.0 - std::sqrt(5.0));
    for (int j = 0; j < m; ++j) {
        double z = 1.0 - (2.0 * j + 1.0) / m;
        double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
        double phi = golden_angle * j;
        q.nodes[j] = {rho * std::cos(phi), rho * std::sin(phi), z};
    }
    // degree <= 2 moment self-test against the normalised measure
    double m1[3] = {0, 0, 0};
    double m2[3][3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};
    for (int j = 0; j < m; ++j)
        for (int a = 0; a < 3; ++a) {
            m1[a] += q.weights[j] * q.nodes[j][a];
            for (int b = 0; b < 3; ++b) m2[a][b] += q.weights[j] * q.nodes[j][a] * q.nodes[j][b];
        }
    for (int a = 0; a < 3; ++a) {
        if (std::abs(m1[a]) > 1e-3)
            throw std::runtime_error("sphere_quadrature: degree-1 moment self-test failed");
        for (int b = 0; b < 3; ++b) {
            double want = a == b ? 1.0 / 3.0 : 0.0;
            if (std::abs(m2[a][b] - want) > 1e-3)
                throw std::runtime_error("sphere_quadrature: degree-2 moment self-test failed");
        }
    }
    return q;
}

double sphere_l2(const SphereSamples& s) {
    double acc = 0.0;
    for (std::size_t j = 0; j < s.values.size(); ++j)
        acc += s.quad.weights[j] * std::norm(s.values[j]);
    return std::sqrt(acc);
}

SphereSamples restrict(const Field& f, double radius, const SphereQuadrature& quad) {
    if (!(radius > 0)) throw std::invalid_argument("restrict: radius must be positive");
    if (!(radius < 0.5 * f.grid.n * f.grid.freq_step))
        throw std::invalid_argument("restrict: radius beyond the Nyquist shell");
    Field fp = transform(f, Domain::Position);
    std::vector<Vec3> pts(quad.size());
    for (std::size_t j = 0; j < quad.size(); ++j)
        pts[j] = {radius * quad.nodes[j][0], radius * quad.nodes[j][1], radius * quad.nodes[j][2]};
    SphereSamples s;
    s.radius = radius;
    s.quad = quad;
    s.values = nudft_forward(fp, pts);
    return s;
}

Field extend(const SphereSamples& s, const Grid3& grid) {
    std::vector<Vec3> pts(s.quad.size());
    for (std::size_t j = 0; j < s.quad.size(); ++j)
        pts[j] = {s.radius * s.quad.nodes[j][0], s.radius * s.quad.nodes[j][1],
                  s.radius * s.quad.nodes[j][2]};
    return nudft_adjoint(grid, pts, s.quad.weights, s.values);
}

TraceG trace_G(const Field& f, double lambda, const SphereQuadrature& quad) {
    if (!(lambda > 0)) throw std::invalid_argument("trace_G: lambda must be positive");
    if (f.grid.n > 24)
        throw std::invalid_argument("trace_G: n > 24 makes the O(n^6) kernel form infeasible");
    Field fp = transform(f, Domain::Position);
    if (l1_fraction_outside_middle_half(fp) > 0.02)
        throw std::invalid_argument("trace_G: f must be supported in the middle half of the box");
    TraceG out;
    SphereSamples s = restrict(fp, lambda, quad);
    double l2 = sphere_l2(s);
    out.spectral = 4.0 * kPi * l2 * l2;

    const double h3 = fp.grid.h * fp.grid.h * fp.grid.h;
    Field conv = radial_convolution(
        fp, [lambda](double r) { return cplx(std::sin(lambda * r) / (lambda * r), 0.0); },
        cplx(h3, 0.0));
    cplx g = 4.0 * kPi * inner(conv, fp);
    out.kernel = g.real();
    out.kernel_imag = g.imag();
    return out;
}

Field vanishing_testfn(const Field& g) {
    Field fh = transform(g, Domain::Frequency);
    const Grid3& gr = fh.grid;
#pragma omp parallel for schedule(static)
    for (int a = 0; a < gr.n; ++a) {
        double xa = gr.xi(a);
        for (int b = 0; b < gr.n; ++b) {
            double xb = gr.xi(b);
            for (int c = 0; c < gr.n; ++c) {
                double xc = gr.xi(c);
                fh.at(a, b, c) *= cplx(xa * xa + xb * xb + xc * xc - 1.0, 0.0);
            }
        }
    }
    return transform(fh, g.domain == Domain::Frequency ? Domain::Frequency : Domain::Position);
}

HolderResult holder_check(const Field& f, double p, const std::vector<double>& deltas,
                          const SphereQuadrature& quad) {
    if (!(p >= 1.0) || !(p < 4.0 / 3.0))
        throw std::invalid_argument("holder_check: need 1 <= p < 4/3");
    if (deltas.size() < 2) throw std::invalid_argument("holder_check: need >= 2 deltas");
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        if (!(deltas[i] > 0)) throw std::invalid_argument("holder_check: deltas must be positive");
        if (i > 0 && !(deltas[i] < deltas[i - 1]))
            throw std::invalid_argument("holder_check: deltas must decrease");
    }
    double onsphere = sphere_l2(restrict(f, 1.0, quad));
    double fl2 = lp_norm(transform(f, Domain::Position), 2.0);
    if (onsphere > 1e-6 * fl2)
        throw std::invalid_argument("holder_check: transform does not vanish on the unit sphere");

    HolderResult res;
    res.gamma = 2.0 / p - 1.5;
    res.deltas = deltas;
    for (double d : deltas) res.values.push_back(sphere_l2(restrict(f, 1.0 + d, quad)));
    res.slopes_ok = true;
    for (std::size_t i = 0; i + 1 < deltas.size(); ++i) {
        double s = std::log(res.values[i] / res.values[i + 1]) / std::log(deltas[i] / deltas[i + 1]);
        res.slopes.push_back(s);
        if (!(s >= res.gamma - 0.05)) res.slopes_ok = false;
    }
    return res;
}

WeightedLadder agmon_weighted_check(const Field& f, double p, double delta,
                                    const std::vector<double>& eps_seq) {
    if (!(p >= 1.0) || !(p < 4.0 / 3.0))
        throw std::invalid_argument("agmon_weighted_check: need 1 <= p < 4/3");
    double pprime = p == 1.0 ? std::numeric_limits<double>::infinity() : p / (p - 1.0);
    double bound = 0.5 - (std::isinf(pprime) ? 0.0 : 2.0 / pprime);
    if (!(delta > 0) || !(delta < bound))
        throw std::invalid_argument("agmon_weighted_check: delta outside (0, 1/2 - 2/p')");
    if (eps_seq.size() < 2) throw std::invalid_argument("agmon_weighted_check: need >= 2 ladder entries");
    for (std::size_t i = 1; i < eps_seq.size(); ++i)
        if (!(eps_seq[i] < eps_seq[i - 1]) || !(eps_seq[i] > 0))
            throw std::invalid_argument("agmon_weighted_check: ladder must decrease and stay positive");

    WeightedLadder lad;
    lad.eps = eps_seq;
    Field fp = transform(f, Domain::Position);
    for (double e : eps_seq) {
        Field u = apply_free_resolvent(fp, spectral_param(1.0, e, +1));
        lad.values.push_back(weighted_l2_norm(u, delta));
    }
    std::size_t m = lad.values.size();
    lad.stabilized = std::abs(lad.values[m - 1] - lad.values[m - 2]) <= 0.05 * lad.values[m - 2];
    lad.growth = lad.values[m - 1] / lad.values[0];
    return lad;
}

JumpFit jump_constant_fit(const Field& f, double lambda, const std::vector<double>& eps_seq,
                          const SphereQuadrature& quad) {
    if (!(lambda > 0)) throw std::invalid_argument("jump_constant_fit: lambda must be positive");
    if (f.domain != Domain::Position)
        throw std::invalid_argument("jump_constant_fit: need a position field");
    if (eps_seq.size() < 3)
        throw std::invalid_argument("jump_constant_fit: need >= 3 ladder entries");
    for (std::size_t i = 0; i < eps_seq.size(); ++i) {
        if (!(eps_seq[i] > 0)) throw std::invalid_argument("jump_constant_fit: eps must be positive");
        if (i > 0 && !(eps_seq[i] < eps_seq[i - 1]))
            throw std::invalid_argument("jump_constant_fit: ladder must decrease");
    }
    const Grid3& g = f.grid;
    if (eps_seq.back() < 4.0 * lambda / g.length - 1e-12)
        throw std::invalid_argument("jump_constant_fit: eps below the 4 lambda / L wraparound floor");
    if (l1_fraction_outside_middle_half(f) > 0.02)
        throw std::invalid_argument("jump_constant_fit: f must live in the middle half of the box");
    const double rho_hi = 0.98 * 0.5 * g.n * g.freq_step;
    if (!(rho_hi > 1.2 * lambda))
        throw std::invalid_argument("jump_constant_fit: lambda too close to the lattice band edge");
    if (!(sphere_l2(restrict(f, lambda, quad)) > 1e-8 * lp_norm(f, 2.0)))
        throw std::invalid_argument("jump_constant_fit: f_hat vanishes on the sphere, ratio ill-posed");

    JumpFit out;
    out.eps = eps_seq;
    const double rho_lo = std::min(0.15 * lambda, 0.5 * rho_hi);
    const int nth = 24;
    for (double eps : eps_seq) {
        Field d = apply_free_resolvent(f, spectral_param(lambda, eps, +1));
        Field dn = apply_free_resolvent(f, spectral_param(lambda, eps, -1));
        for (std::size_t i = 0; i < d.values.size(); ++i) d.values[i] -= dn.values[i];
        double num = inner(d, f).imag();
        // midpoint rule in theta = atan((rho^2 - lambda^2) / eps), which
        // flattens the Lorentzian; D(eps) -> T(lambda) as eps -> 0
        double th_lo = std::atan((rho_lo * rho_lo - lambda * lambda) / eps);
        double th_hi = std::atan((rho_hi * rho_hi - lambda * lambda) / eps);
        double dth = (th_hi - th_lo) / nth, den = 0.0;
        for (int k = 0; k < nth; ++k) {
            double eta = eps * std::tan(th_lo + (k + 0.5) * dth);
            double rho = std::sqrt(lambda * lambda + eta);
            double t = sphere_l2(restrict(f, rho, quad));
            den += 2.0 * t * t * rho * dth;
        }
        den /= 2.0 * kPi * lambda;
        out.c.push_back(num / den);
    }

    // scalar Neville tableau at eps = 0
    std::vector<double> t = out.c;
    for (std::size_t j = 1; j < t.size(); ++j)
        for (std::size_t i = 0; i + j < t.size(); ++i) {
            double xi = eps_seq[i], xj = eps_seq[i + j];
            t[i] = (xj * t[i] - xi * t[i + 1]) / (xj - xi);
        }
    out.c_fit = t[0];
    return out;
}

}  // namespace rlab
