#pragma once

#include <cstdint>

#include "rlab/grid.hpp"

namespace rlab {

/// Standard random test family: complex Gaussian coefficients on the
/// frequency ball |xi| <= n*freq_step/4, zero outside. Position domain.
Field band_limited_field(const Grid3& grid, std::uint64_t seed);

/// Same family multiplied by a smooth envelope supported in |x| < L/4
/// (inside the middle half of the box).
Field midbox_field(const Grid3& grid, std::uint64_t seed);

/// Modulated Gaussian bump amplitude * e^{i xi0.x} e^{-|x-c|^2 / (2 w^2)}.
Field gaussian_bump(const Grid3& grid, const double center[3], double width,
                    const double modulation[3], cplx amplitude);

/// Convenience: centred unmodulated unit bump of the given width.
Field gaussian_bump(const Grid3& grid, double width);

}  // namespace rlab
