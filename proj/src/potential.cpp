#include "rlab/potential.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "rlab/norms.hpp"
#include "rlab/profile.hpp"

namespace rlab {

namespace {

Potential finalize(Field values, double declared_p, double threshold) {
    Potential V;
    V.values = std::move(values);
    V.declared_p = declared_p;
    V.norm_3_2 = lp_norm(V.values, 1.5);
    V.norm_2 = lp_norm(V.values, 2.0);
    V.norm_declared = lp_norm(V.values, declared_p);
    V.model_lp_threshold = threshold;
    return V;
}

}  // namespace

Potential gaussian_well(const Grid3& grid, double depth, double width) {
    if (!(width > 0.0)) throw std::invalid_argument("gaussian_well: width must be > 0");
    Field v(grid, Domain::Position);
    for (int a = 0; a < grid.n; ++a)
        for (int b = 0; b < grid.n; ++b)
            for (int c = 0; c < grid.n; ++c) {
                double xa = grid.x(a), xb = grid.x(b), xc = grid.x(c);
                double r2 = xa * xa + xb * xb + xc * xc;
                v.at(a, b, c) = depth * std::exp(-r2 / (2.0 * width * width));
            }
    return finalize(std::move(v), 2.0, 0.0);
}

Potential multi_bump(const Grid3& grid, int count, std::uint64_t seed, double depth,
                     double width) {
    if (count < 1) throw std::invalid_argument("multi_bump: count must be >= 1");
    if (!(width > 0.0)) throw std::invalid_argument("multi_bump: width must be > 0");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni;
    Field v(grid, Domain::Position);
    for (int j = 0; j < count; ++j) {
        double cx = (uni(rng) - 0.5) * grid.length / 2.0;
        double cy = (uni(rng) - 0.5) * grid.length / 2.0;
        double cz = (uni(rng) - 0.5) * grid.length / 2.0;
        double w = width * (0.7 + 0.6 * uni(rng));
        double d = depth * (0.75 + 0.5 * uni(rng));
        for (int a = 0; a < grid.n; ++a)
            for (int b = 0; b < grid.n; ++b)
                for (int c = 0; c < grid.n; ++c) {
                    double xa = grid.x(a) - cx, xb = grid.x(b) - cy, xc = grid.x(c) - cz;
                    double r2 = xa * xa + xb * xb + xc * xc;
                    v.at(a, b, c) += d * std::exp(-r2 / (2.0 * w * w));
                }
    }
    return finalize(std::move(v), 2.0, 0.0);
}

Potential anisotropic_slow(const Grid3& grid, double amplitude) {
    if (amplitude == 0.0)
        throw std::invalid_argument("anisotropic_slow: amplitude must be nonzero");
    Field v(grid, Domain::Position);
    for (int a = 0; a < grid.n; ++a)
        for (int b = 0; b < grid.n; ++b)
            for (int c = 0; c < grid.n; ++c) {
                double x1 = grid.x(a), x2 = grid.x(b), x3 = grid.x(c);
                double rperp = std::sqrt(x2 * x2 + x3 * x3);
                double r = std::sqrt(x1 * x1 + rperp * rperp);
                // smooth cutoff keeps the sample periodic-smooth at the faces
                double window = smooth_profile(2.0 * r / grid.length);
                v.at(a, b, c) =
                    amplitude * window / ((1.0 + rperp) * (1.0 + x1 * x1));
            }
    return finalize(std::move(v), 2.5, 2.0);
}

Potential sample_potential(PotentialKind kind, const PotentialParams& params,
                           const Grid3& grid) {
    switch (kind) {
        case PotentialKind::GaussianWell:
            return gaussian_well(grid, params.depth, params.width);
        case PotentialKind::MultiBump:
            return multi_bump(grid, params.count, params.seed, params.depth,
                              params.width);
        case PotentialKind::AnisotropicSlow:
            return anisotropic_slow(grid, params.depth);
    }
    throw std::invalid_argument("sample_potential: unknown kind");
}

Field multiply(const Potential& V, const Field& f) {
    require_same_grid(V.values, f, "multiply");
    if (f.domain != Domain::Position)
        throw std::invalid_argument("multiply: f must be a position field");
    Field out(f.grid, Domain::Position);
    for (std::size_t i = 0; i < f.values.size(); ++i)
        out.values[i] = V.values.values[i].real() * f.values[i];
    return out;
}

}  // namespace rlab
