#include "rlab/random_fields.hpp"

#include <cmath>
#include <random>

#include "rlab/fft.hpp"
#include "rlab/profile.hpp"

namespace rlab {

Field band_limited_field(const Grid3& g, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Field fh(g, Domain::Frequency);
    const double cut = 0.25 * g.n * g.freq_step;
    const double cut2 = cut * cut;
    for (int a = 0; a < g.n; ++a) {
        double xa = g.xi(a);
        for (int b = 0; b < g.n; ++b) {
            double xb = g.xi(b);
            for (int c = 0; c < g.n; ++c) {
                double xc = g.xi(c);
                if (xa * xa + xb * xb + xc * xc <= cut2)
                    fh.at(a, b, c) = cplx(gauss(rng), gauss(rng));
            }
        }
    }
    return transform(fh, Domain::Position);
}

Field midbox_field(const Grid3& g, std::uint64_t seed) {
    Field f = band_limited_field(g, seed);
    const double quarter = 0.25 * g.length;
    for (int a = 0; a < g.n; ++a) {
        double xa = g.x(a);
        for (int b = 0; b < g.n; ++b) {
            double xb = g.x(b);
            for (int c = 0; c < g.n; ++c) {
                double xc = g.x(c);
                double r = std::sqrt(xa * xa + xb * xb + xc * xc);
                f.at(a, b, c) *= smooth_profile(r / quarter);
            }
        }
    }
    return f;
}

Field gaussian_bump(const Grid3& g, const double center[3], double width,
                    const double modulation[3], cplx amplitude) {
    if (!(width > 0)) throw std::invalid_argument("gaussian_bump: width must be positive");
    Field f(g, Domain::Position);
    const double inv2w2 = 1.0 / (2.0 * width * width);
    for (int a = 0; a < g.n; ++a) {
        double dx = g.x(a) - center[0];
        for (int b = 0; b < g.n; ++b) {
            double dy = g.x(b) - center[1];
            for (int c = 0; c < g.n; ++c) {
                double dz = g.x(c) - center[2];
                double r2 = dx * dx + dy * dy + dz * dz;
                double ph = modulation[0] * g.x(a) + modulation[1] * g.x(b) + modulation[2] * g.x(c);
                f.at(a, b, c) = amplitude * std::exp(-r2 * inv2w2) * std::polar(1.0, ph);
            }
        }
    }
    return f;
}

Field gaussian_bump(const Grid3& g, double width) {
    double c[3] = {0, 0, 0};
    double m[3] = {0, 0, 0};
    return gaussian_bump(g, c, width, m, cplx(1.0, 0.0));
}

}  // namespace rlab
