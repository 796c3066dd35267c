#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "rlab/fft.hpp"
#include "rlab/fit.hpp"
#include "rlab/kernels.hpp"
#include "rlab/norms.hpp"
#include "rlab/opnorm.hpp"
#include "rlab/random_fields.hpp"

using namespace rlab;

TEST_CASE("fit_power_law recovers exact power laws") {
    std::vector<double> s = {1, 2, 4, 8, 16};
    std::vector<double> v;
    for (double x : s) v.push_back(3.7 * std::pow(x, -0.5));
    ScalingFit fit = fit_power_law(s, v);
    CHECK(fit.exponent == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(std::exp(fit.log_prefactor) == doctest::Approx(3.7).epsilon(1e-12));
    CHECK(fit.residual < 1e-12);

    // jitter shows up in the residual, not as a crash
    v[2] *= 1.25;
    ScalingFit fit2 = fit_power_law(s, v);
    CHECK(fit2.residual > 1e-3);

    CHECK_THROWS_AS(fit_power_law({1, 2}, {1, 2}), std::invalid_argument);
    CHECK_THROWS_AS(fit_power_law({1, 2, 3}, {1, -2, 3}), std::invalid_argument);
    CHECK_THROWS_AS(fit_power_law({1, 1, 1}, {1, 2, 3}), std::invalid_argument);
}

TEST_CASE("estimate_opnorm on identity and scalar multiples") {
    Grid3 g = make_grid(8, 8.0);
    LinearOperator id{[](const Field& f) { return f; }, [](const Field& f) { return f; }};
    auto est = estimate_opnorm(id, g, 2.0, 2.0, 5, 1, 42);
    CHECK(est.lower_bound == doctest::Approx(1.0).epsilon(1e-12));

    LinearOperator twice{[](const Field& f) {
                             Field o = f;
                             for (auto& z : o.values) z *= 2.0;
                             return o;
                         },
                         [](const Field& f) {
                             Field o = f;
                             for (auto& z : o.values) z *= 2.0;
                             return o;
                         }};
    est = estimate_opnorm(twice, g, 2.0, 2.0, 5, 1, 42);
    CHECK(est.lower_bound == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("estimate_opnorm finds the max modulus of a frequency multiplier") {
    Grid3 g = make_grid(16, 16.0);
    auto apply = [g](const Field& f) {
        Field fh = transform(f, Domain::Frequency);
        apply_symbol(fh, [](const Vec3& xi) {
            double q = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
            return cplx(1.0 / (1.0 + q), 0.0);
        });
        return transform(fh, Domain::Position);
    };
    LinearOperator op{apply, apply};  // real even symbol: self-adjoint
    auto est = estimate_opnorm(op, g, 2.0, 2.0, 400, 2, 7);
    CHECK(est.lower_bound == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(est.lower_bound <= 1.0 + 1e-12);
}

TEST_CASE("estimate_opnorm 4/3 -> 4 on identity converges to the point-mass ratio") {
    Grid3 g = make_grid(8, 8.0);
    LinearOperator id{[](const Field& f) { return f; }, [](const Field& f) { return f; }};
    auto est = estimate_opnorm(id, g, 4.0 / 3.0, 4.0, 60, 2, 11);
    // sup ||f||_4 / ||f||_{4/3} over the grid is h^{-3/2}, attained at a point mass
    CHECK(est.lower_bound == doctest::Approx(std::pow(g.h, -1.5)).epsilon(1e-6));
}

TEST_CASE("estimate_opnorm argument validation") {
    Grid3 g = make_grid(8, 8.0);
    LinearOperator id{[](const Field& f) { return f; }, [](const Field& f) { return f; }};
    CHECK_THROWS_AS(estimate_opnorm(id, g, 1.0, 4.0, 5, 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(estimate_opnorm(id, g, 2.0, 2.0, 0, 1, 1), std::invalid_argument);
}

TEST_CASE("nudft kernels match their serial references") {
    Grid3 g = make_grid(8, 12.0);
    Field f = midbox_field(g, 5);
    std::vector<Vec3> pts = {{0.3, -1.1, 0.7}, {1.9, 0.2, -0.4}, {0.0, 0.0, 2.2}};
    auto a = nudft_forward(f, pts);
    auto b = serial::nudft_forward(f, pts);
    for (std::size_t i = 0; i < pts.size(); ++i) CHECK(std::abs(a[i] - b[i]) < 1e-11 * std::abs(b[i]) + 1e-13);

    std::vector<double> w = {0.5, 0.25, 0.25};
    std::vector<cplx> s = {{1.0, 0.5}, {-0.3, 0.1}, {0.0, -2.0}};
    Field ua = nudft_adjoint(g, pts, w, s);
    Field ub = serial::nudft_adjoint(g, pts, w, s);
    for (std::size_t i = 0; i < ua.values.size(); ++i)
        CHECK(std::abs(ua.values[i] - ub.values[i]) < 1e-12);
}

TEST_CASE("radial_convolution matches its serial reference") {
    Grid3 g = make_grid(8, 8.0);
    Field f = midbox_field(g, 9);
    auto kern = [](double r) { return cplx(std::cos(r) / r, std::sin(r) / (1.0 + r)); };
    Field a = radial_convolution(f, kern, cplx(0.3, 0.0));
    Field b = serial::radial_convolution(f, kern, cplx(0.3, 0.0));
    double scale = lp_norm(a, std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < a.values.size(); ++i)
        CHECK(std::abs(a.values[i] - b.values[i]) < 1e-11 * scale);
}

TEST_CASE("expsum_l4_cube matches serial and the single-wave closed form") {
    std::vector<Vec3> pts = {{1.0, 0.1, -0.2}, {-0.5, 0.9, 0.3}, {0.2, -0.7, 1.1}};
    std::vector<cplx> c = {{1.0, 0.0}, {0.4, -0.6}, {-0.2, 0.9}};
    double a = expsum_l4_cube(pts, c, 4.0, 0.55);
    double b = serial::expsum_l4_cube(pts, c, 4.0, 0.55);
    CHECK(a == doctest::Approx(b).epsilon(1e-12));

    // single plane wave: |E| = |c| everywhere, so the norm is |c| |Q|^{1/4}
    double single = expsum_l4_cube({{0.7, -0.3, 0.2}}, {cplx(0.0, 2.0)}, 4.0, 0.55);
    CHECK(single == doctest::Approx(2.0 * std::pow(64.0, 0.25)).epsilon(1e-12));
}

TEST_CASE("adjointness of nudft_forward and nudft_adjoint") {
    Grid3 g = make_grid(8, 10.0);
    Field f = band_limited_field(g, 17);
    std::vector<Vec3> pts;
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> uni(-2.0, 2.0);
    for (int j = 0; j < 16; ++j) pts.push_back({uni(rng), uni(rng), uni(rng)});
    std::vector<double> w(16, 1.0 / 16);
    std::vector<cplx> s(16);
    for (auto& z : s) z = cplx(uni(rng), uni(rng));

    auto rf = nudft_forward(f, pts);
    cplx lhs(0, 0);  // <s, restrict f>_sphere
    for (int j = 0; j < 16; ++j) lhs += w[j] * s[j] * std::conj(rf[j]);
    Field ext = nudft_adjoint(g, pts, w, s);
    cplx rhs = inner(ext, f);  // <extend s, f>_grid
    CHECK(std::abs(lhs - rhs) < 1e-10 * std::abs(rhs));
}
