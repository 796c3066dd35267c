#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "rlab/fft.hpp"
#include "rlab/norms.hpp"
#include "rlab/random_fields.hpp"
#include "rlab/resolvent.hpp"
#include "rlab/sphere.hpp"

using namespace rlab;

namespace {

// projection of j onto e over the middle half of the box, plus the relative
// residual left after removing that component
void midbox_projection(const Grid3& g, const Field& j, const Field& e, cplx& chat,
                       double& resid) {
    cplx num(0.0, 0.0);
    double den = 0.0, jj = 0.0, r = 0.0;
    for (int a = 0; a < g.n; ++a)
        for (int b = 0; b < g.n; ++b)
            for (int c = 0; c < g.n; ++c) {
                if (std::max({std::abs(g.x(a)), std::abs(g.x(b)), std::abs(g.x(c))}) >
                    0.25 * g.length)
                    continue;
                num += j.at(a, b, c) * std::conj(e.at(a, b, c));
                den += std::norm(e.at(a, b, c));
                jj += std::norm(j.at(a, b, c));
            }
    chat = num / den;
    for (int a = 0; a < g.n; ++a)
        for (int b = 0; b < g.n; ++b)
            for (int c = 0; c < g.n; ++c) {
                if (std::max({std::abs(g.x(a)), std::abs(g.x(b)), std::abs(g.x(c))}) >
                    0.25 * g.length)
                    continue;
                r += std::norm(j.at(a, b, c) - chat * e.at(a, b, c));
            }
    resid = std::sqrt(r / jj);
}

}  // namespace

TEST_CASE("fibonacci quadrature integrates low-degree harmonics") {
    for (int m : {256, 1024}) {
        SphereQuadrature q = sphere_quadrature(m);
        REQUIRE(q.size() == std::size_t(m));
        double w = 0.0, m1[3] = {0, 0, 0};
        for (std::size_t j = 0; j < q.size(); ++j) {
            w += q.weights[j];
            double len = std::hypot(q.nodes[j][0], q.nodes[j][1], q.nodes[j][2]);
            CHECK(std::abs(len - 1.0) < 1e-14);
            for (int a = 0; a < 3; ++a) m1[a] += q.weights[j] * q.nodes[j][a];
        }
        CHECK(std::abs(w - 1.0) < 1e-13);
        for (int a = 0; a < 3; ++a) CHECK(std::abs(m1[a]) < 1e-3);
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) {
                double s = 0.0;
                for (std::size_t j = 0; j < q.size(); ++j)
                    s += q.weights[j] * q.nodes[j][a] * q.nodes[j][b];
                CHECK(std::abs(s - (a == b ? 1.0 / 3.0 : 0.0)) < 1e-3);
            }
    }

    // nodes must be pairwise distinct with roughly even spacing
    SphereQuadrature q = sphere_quadrature(256);
    double dmin = 10.0;
    for (std::size_t i = 0; i < q.size(); ++i)
        for (std::size_t j = i + 1; j < q.size(); ++j) {
            double d = std::hypot(q.nodes[i][0] - q.nodes[j][0], q.nodes[i][1] - q.nodes[j][1],
                                  q.nodes[i][2] - q.nodes[j][2]);
            dmin = std::min(dmin, d);
        }
    CHECK(dmin > 0.05);

    CHECK_THROWS_AS(sphere_quadrature(32), std::invalid_argument);
}

TEST_CASE("restriction of a lattice plane wave matches the separable sum") {
    Grid3 g = make_grid(16, 8.0);
    cplx amp(1.3, -0.4);
    double k[3] = {2.0 * g.freq_step, -3.0 * g.freq_step, 1.0 * g.freq_step};
    Field f(g, Domain::Position);
    for (int a = 0; a < g.n; ++a)
        for (int b = 0; b < g.n; ++b)
            for (int c = 0; c < g.n; ++c)
                f.at(a, b, c) =
                    amp * std::exp(cplx(0.0, k[0] * g.x(a) + k[1] * g.x(b) + k[2] * g.x(c)));

    SphereQuadrature q = sphere_quadrature(128);
    const double r = 1.3;
    SphereSamples s = restrict(f, r, q);
    REQUIRE(s.values.size() == q.size());
    auto dirichlet = [&](double eta) {
        cplx acc(0.0, 0.0);
        for (int j = 0; j < g.n; ++j) acc += std::exp(cplx(0.0, eta * g.x(j)));
        return g.h * acc;
    };
    double scale = std::abs(amp) * g.length * g.length * g.length;
    for (std::size_t j = 0; j < q.size(); ++j) {
        cplx want = amp * dirichlet(k[0] - r * q.nodes[j][0]) * dirichlet(k[1] - r * q.nodes[j][1]) *
                    dirichlet(k[2] - r * q.nodes[j][2]);
        CHECK(std::abs(s.values[j] - want) < 1e-10 * scale);
    }

    // radius at or past the lattice band edge is rejected
    CHECK_THROWS_AS(restrict(f, 0.5 * g.n * g.freq_step + 0.01, q), std::invalid_argument);
}

TEST_CASE("radial data restricts to constant node values") {
    Grid3 g = make_grid(32, 32.0);
    Field b = gaussian_bump(g, 2.0);
    SphereQuadrature q = sphere_quadrature(256);
    SphereSamples s = restrict(b, 1.0, q);
    double lo = 1e300, hi = 0.0;
    for (const cplx& v : s.values) {
        lo = std::min(lo, std::abs(v));
        hi = std::max(hi, std::abs(v));
    }
    CHECK(hi > 0.0);
    CHECK((hi - lo) / hi < 1e-10);
}

TEST_CASE("the vanishing projector kills the unit-sphere restriction") {
    // single lattice mode: the factor |k0|^2 - 1 comes out exactly
    {
        Grid3 g = make_grid(16, 8.0);
        Field gh(g, Domain::Frequency);
        gh.at(1, 2, 0) = cplx(0.7, 0.3);
        Field gp = transform(gh, Domain::Position);
        Field f = vanishing_testfn(gp);
        double k2 = g.freq_step * g.freq_step * 5.0;
        SphereQuadrature q = sphere_quadrature(128);
        SphereSamples sg = restrict(gp, 1.0, q);
        SphereSamples sf = restrict(f, 1.0, q);
        double scale = 0.0;
        for (const cplx& v : sg.values) scale = std::max(scale, std::abs(v));
        for (std::size_t j = 0; j < q.size(); ++j)
            CHECK(std::abs(sf.values[j] - (k2 - 1.0) * sg.values[j]) < 1e-12 * scale);
    }

    // smooth data: the restriction shrinks and refines away
    SphereQuadrature q = sphere_quadrature(256);
    {
        Grid3 g = make_grid(16, 16.0);
        Field f = vanishing_testfn(gaussian_bump(g, 1.25));
        CHECK(sphere_l2(restrict(f, 1.0, q)) < 1e-3 * lp_norm(f, 2.0));
    }
    {
        Grid3 g = make_grid(32, 16.0);
        Field f = vanishing_testfn(gaussian_bump(g, 1.2));
        CHECK(sphere_l2(restrict(f, 1.0, q)) < 1e-7 * lp_norm(f, 2.0));
    }
}

TEST_CASE("extension reproduces the origin value and the radial profile") {
    Grid3 g = make_grid(32, 32.0);
    SphereQuadrature q = sphere_quadrature(1024);
    SphereSamples s;
    s.radius = 1.0;
    s.quad = q;
    s.values.assign(q.size(), cplx(1.0, 0.0));
    Field u = extend(s, g);
    int n0 = g.n / 2;  // the x = 0 cell
    CHECK(std::abs(u.at(n0, n0, n0) - cplx(1.0, 0.0)) < 1e-12);

    double worst = 0.0;
    for (int d = 1; d <= 8; ++d) {
        double r = d * g.h;
        worst = std::max(worst, std::abs(u.at(n0 + d, n0, n0) - cplx(std::sin(r) / r, 0.0)));
        worst = std::max(worst, std::abs(u.at(n0, n0 + d, n0) - cplx(std::sin(r) / r, 0.0)));
        double rd = r * std::sqrt(3.0);
        worst =
            std::max(worst, std::abs(u.at(n0 + d, n0 + d, n0 + d) - cplx(std::sin(rd) / rd, 0.0)));
    }
    CHECK(worst < 1e-3);
}

TEST_CASE("extend is the exact adjoint of restrict") {
    Grid3 g = make_grid(8, 4.0);
    SphereQuadrature q = sphere_quadrature(96);
    std::mt19937_64 rng(2024);
    std::normal_distribution<double> nd(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        Field f = band_limited_field(g, 500 + trial);
        SphereSamples s;
        s.radius = 1.0;
        s.quad = q;
        s.values.resize(q.size());
        for (cplx& v : s.values) v = cplx(nd(rng), nd(rng));

        Field u = extend(s, g);
        SphereSamples rf = restrict(f, 1.0, q);
        cplx lhs = inner(u, f);
        cplx rhs(0.0, 0.0);
        for (std::size_t j = 0; j < q.size(); ++j)
            rhs += q.weights[j] * s.values[j] * std::conj(rf.values[j]);
        CHECK(std::abs(lhs - rhs) < 1e-10 * (std::abs(lhs) + lp_norm(f, 2.0)));
    }
}

TEST_CASE("trace function agrees between spectral and kernel routes") {
    Grid3 g = make_grid(16, 16.0);
    SphereQuadrature q = sphere_quadrature(256);
    const double h6 = std::pow(g.h, 6.0);

    // one loaded cell: both routes reduce to 4 pi h^6 |M|^2
    {
        Field f(g, Domain::Position);
        cplx M(2.3, -0.7);
        f.at(8, 8, 8) = M;
        TraceG t = trace_G(f, 1.0, q);
        double want = 4.0 * kPi * h6 * std::norm(M);
        CHECK(std::abs(t.kernel - want) < 1e-10 * want);
        CHECK(std::abs(t.spectral - want) < 1e-10 * want);
        CHECK(std::abs(t.kernel_imag) < 1e-10 * want);
    }

    // two loaded cells: kernel route has a closed form through sinc
    {
        Field f(g, Domain::Position);
        cplx a(1.1, 0.2), b(-0.8, 0.5);
        f.at(8, 8, 8) = a;
        f.at(10, 9, 8) = b;
        double dist = std::sqrt(5.0) * g.h;
        TraceG t = trace_G(f, 1.0, q);
        double want = 4.0 * kPi * h6 *
                      (std::norm(a) + std::norm(b) +
                       2.0 * (a * std::conj(b)).real() * std::sin(dist) / dist);
        CHECK(std::abs(t.kernel - want) < 1e-12 * 4.0 * kPi * h6 * (std::norm(a) + std::norm(b)));
        CHECK(std::abs(t.spectral - t.kernel) < 1e-2 * std::abs(t.kernel));
    }

    // vanishing data: the trace collapses relative to its natural size
    {
        Field f = vanishing_testfn(gaussian_bump(g, 1.25));
        TraceG t = trace_G(f, 1.0, q);
        double l1 = lp_norm(f, 1.0);
        CHECK(t.spectral < 1e-8 * 4.0 * kPi * l1 * l1);
        CHECK(std::abs(t.kernel_imag) < 1e-10 * 4.0 * kPi * l1 * l1);
    }

    // preconditions: kernel route needs a small grid and midbox support
    {
        Grid3 big = make_grid(32, 16.0);
        CHECK_THROWS_AS(trace_G(gaussian_bump(big, 1.0), 1.0, q), std::invalid_argument);
        CHECK_THROWS_AS(trace_G(band_limited_field(g, 3), 1.0, q), std::invalid_argument);
    }
}

TEST_CASE("off-sphere restriction growth follows the expected exponents") {
    Grid3 g = make_grid(32, 16.0);
    double ctr[3] = {0.4, -0.3, 0.2}, mod[3] = {0.9, -0.5, 0.3};
    Field f = vanishing_testfn(gaussian_bump(g, ctr, 1.2, mod, cplx(1.0, 0.4)));
    SphereQuadrature q = sphere_quadrature(256);
    std::vector<double> deltas = {0.32, 0.16, 0.08, 0.04, 0.02};

    for (double p : {1.0, 1.1, 1.2}) {
        HolderResult h = holder_check(f, p, deltas, q);
        CHECK(h.gamma == doctest::Approx(2.0 / p - 1.5).epsilon(1e-12));
        CHECK(h.slopes_ok);
        REQUIRE(h.values.size() == deltas.size());
        for (std::size_t i = 1; i < h.values.size(); ++i) CHECK(h.values[i] < h.values[i - 1]);
        // first-order vanishing data decays like delta^1, comfortably above
        // every gamma in range
        double last = h.slopes.back();
        CHECK(last > 0.9);
        CHECK(last < 1.05);
    }

    CHECK_THROWS_AS(holder_check(f, 4.0 / 3.0, deltas, q), std::invalid_argument);
    CHECK_THROWS_AS(holder_check(f, 1.5, deltas, q), std::invalid_argument);
    CHECK_THROWS_AS(holder_check(f, 0.9, deltas, q), std::invalid_argument);
    CHECK_THROWS_AS(holder_check(gaussian_bump(g, 1.2), 1.0, deltas, q), std::invalid_argument);
    CHECK_THROWS_AS(holder_check(f, 1.0, {0.02, 0.04}, q), std::invalid_argument);
}

TEST_CASE("weighted resolvent ladders separate vanishing from generic data") {
    Grid3 g = make_grid(32, 32.0);
    std::vector<double> lad = {0.8, 0.4, 0.2, 0.1, 0.05, 0.025};

    WeightedLadder good = agmon_weighted_check(vanishing_testfn(gaussian_bump(g, 2.0)), 1.2, 0.1, lad);
    CHECK(good.stabilized);
    CHECK(good.growth < 2.5);

    WeightedLadder bad = agmon_weighted_check(gaussian_bump(g, 2.0), 1.2, 0.1, lad);
    CHECK_FALSE(bad.stabilized);
    CHECK(bad.growth > 1.2);

    Field f = vanishing_testfn(gaussian_bump(g, 2.0));
    CHECK_THROWS_AS(agmon_weighted_check(f, 1.4, 0.1, lad), std::invalid_argument);
    CHECK_THROWS_AS(agmon_weighted_check(f, 1.2, 0.2, lad), std::invalid_argument);
    CHECK_THROWS_AS(agmon_weighted_check(f, 1.2, 0.1, {0.4}), std::invalid_argument);
    CHECK_THROWS_AS(agmon_weighted_check(f, 1.2, 0.1, {0.1, 0.2}), std::invalid_argument);
}

TEST_CASE("restriction ratio is stable under grid refinement") {
    Grid3 g16 = make_grid(16, 16.0);
    SphereQuadrature q = sphere_quadrature(128);
    double m16 = 0.0, m32 = 0.0;
    for (int seed = 0; seed < 200; ++seed) {
        Field f = band_limited_field(g16, seed);
        m16 = std::max(m16, sphere_l2(restrict(f, 1.0, q)) / lp_norm(f, 4.0 / 3.0));
        Field f2 = trig_upsample(f, 32);
        m32 = std::max(m32, sphere_l2(restrict(f2, 1.0, q)) / lp_norm(f2, 4.0 / 3.0));
    }
    CHECK(m16 > 0.0);
    CHECK(std::abs(m32 - m16) / m16 < 0.10);
}

TEST_CASE("trig upsample reproduces the same polynomial") {
    Grid3 g = make_grid(16, 8.0);
    Field f = band_limited_field(g, 7);
    Field u = trig_upsample(f, 32);
    double worst = 0.0;
    for (int a = 0; a < g.n; ++a)
        for (int b = 0; b < g.n; ++b)
            for (int c = 0; c < g.n; ++c)
                worst = std::max(worst, std::abs(u.at(2 * a, 2 * b, 2 * c) - f.at(a, b, c)));
    CHECK(worst < 1e-12);
    CHECK(std::abs(lp_norm(u, 2.0) / lp_norm(f, 2.0) - 1.0) < 1e-12);

    // real data stays real through the split Nyquist rows
    Field b = gaussian_bump(g, 1.0);
    Field ub = trig_upsample(b, 32);
    double re = 0.0, im = 0.0;
    for (const cplx& v : ub.values) {
        re = std::max(re, std::abs(v.real()));
        im = std::max(im, std::abs(v.imag()));
    }
    CHECK(im < 1e-13 * re);

    CHECK_THROWS_AS(trig_upsample(f, 8), std::invalid_argument);
}

TEST_CASE("jump constant fit is stable across random data") {
    Grid3 g = make_grid(32, 32.0);
    SphereQuadrature q = sphere_quadrature(256);
    std::vector<double> lad = {1.6, 0.8, 0.4};
    const double cont = 1.0 / (2.0 * kPi);

    double lo = 1e300, hi = 0.0;
    for (int seed : {11, 22, 33, 44, 55, 66, 77, 88, 99, 110}) {
        Field f = midbox_field(g, seed);
        JumpFit jf = jump_constant_fit(f, 1.0, lad, q);
        REQUIRE(jf.c.size() == lad.size());
        for (double c : jf.c) {
            CHECK(c > 0.15);
            CHECK(c < 0.17);
        }
        CHECK(std::abs(jf.c_fit - cont) < 0.02 * cont);
        lo = std::min(lo, jf.c_fit);
        hi = std::max(hi, jf.c_fit);
    }
    CHECK((hi - lo) / (0.5 * (hi + lo)) < 0.02);

    Field f = midbox_field(g, 11);
    CHECK_THROWS_AS(jump_constant_fit(f, 1.0, {1.6, 0.8, 0.1}, q), std::invalid_argument);
    CHECK_THROWS_AS(jump_constant_fit(f, 1.0, {1.6, 0.8}, q), std::invalid_argument);
    CHECK_THROWS_AS(jump_constant_fit(f, -1.0, lad, q), std::invalid_argument);
    CHECK_THROWS_AS(jump_constant_fit(band_limited_field(g, 4), 1.0, lad, q),
                    std::invalid_argument);
    CHECK_THROWS_AS(jump_constant_fit(vanishing_testfn(gaussian_bump(g, 2.0)), 1.0, lad, q),
                    std::invalid_argument);
    Grid3 coarse = make_grid(16, 16.0);
    CHECK_THROWS_AS(jump_constant_fit(midbox_field(coarse, 1), 2.7, {1.6, 1.2, 0.8}, q),
                    std::invalid_argument);
}

TEST_CASE("extrapolated jump aligns with the sphere extension") {
    Grid3 g = make_grid(16, 16.0);
    SphereQuadrature q = sphere_quadrature(256);
    Field f = midbox_field(g, 11);
    Field e = extend(restrict(f, 1.0, q), g);

    Field raw = apply_free_resolvent(f, spectral_param(1.0, 0.4, +1));
    Field dn = apply_free_resolvent(f, spectral_param(1.0, 0.4, -1));
    for (std::size_t i = 0; i < raw.values.size(); ++i) raw.values[i] -= dn.values[i];
    cplx c_raw;
    double resid_raw;
    midbox_projection(g, raw, e, c_raw, resid_raw);

    Field j = resolvent_jump(f, 1.0, {0.8, 0.55, 0.38});
    cplx c_ext;
    double resid_ext;
    midbox_projection(g, j, e, c_ext, resid_ext);

    const cplx cont(0.0, 1.0 / (2.0 * kPi));
    // extrapolation strips the eps-damping of the tails: the projection lands
    // much closer to i/(2 pi) and the leftover residual shrinks
    CHECK(std::abs(c_ext - cont) < 0.2 * std::abs(cont));
    CHECK(resid_ext < 0.25);
    CHECK(std::abs(c_raw - cont) > 2.0 * std::abs(c_ext - cont));
    CHECK(resid_ext < resid_raw);
}
