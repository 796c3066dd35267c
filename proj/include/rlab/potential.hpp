#pragma once

#include <cstdint>

#include "rlab/grid.hpp"

namespace rlab {

/// Real potential sample with its Lp norms cached at construction.
/// declared_p is the exponent class the sample is meant to model.
/// model_lp_threshold is the infimum of the exponents p for which the
/// untruncated model has finite Lp norm (0 when every p >= 1 works), so
/// callers can tell which cached norms exist only because of the box.
struct Potential {
    Field values;  // imaginary parts identically zero
    double declared_p = 2.0;
    double norm_3_2 = 0;
    double norm_2 = 0;
    double norm_declared = 0;
    double model_lp_threshold = 0;
};

enum class PotentialKind { GaussianWell, MultiBump, AnisotropicSlow };

struct PotentialParams {
    double depth = -1.0;   // amplitude, sign included
    double width = 2.0;    // Gaussian width (GaussianWell, MultiBump)
    int count = 3;         // bumps (MultiBump)
    std::uint64_t seed = 1;
    double declared_p = 2.0;
};

Potential sample_potential(PotentialKind kind, const PotentialParams& params,
                           const Grid3& grid);

/// depth * exp(-|x|^2 / (2 width^2)); ||V||_inf = |depth|.
Potential gaussian_well(const Grid3& grid, double depth, double width);

/// Sum of `count` Gaussian bumps with seeded centres in the middle half of
/// the box and mild width/depth jitter.
Potential multi_bump(const Grid3& grid, int count, std::uint64_t seed, double depth,
                     double width);

/// amplitude / ((1 + rho_perp)(1 + x1^2)) cut off smoothly at the box edge:
/// decays like r^-1 transverse to the x1 axis and like r^-2 along it, so the
/// untruncated model is in Lp exactly for p > 2 (model_lp_threshold = 2).
Potential anisotropic_slow(const Grid3& grid, double amplitude);

/// Pointwise product V f.
Field multiply(const Potential& V, const Field& f);

}  // namespace rlab
