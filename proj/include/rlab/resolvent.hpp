#pragma once

#include "rlab/grid.hpp"

namespace rlab {

/// Spectral point z = lambda^2 + i*sign*eps with the square root taken on
/// the branch Im sqrt(z) >= 0. That single branch choice also produces the
/// conjugated kernel/symbol for Im z < 0, so sign = -1 needs no special
/// casing downstream.
struct SpectralParam {
    double lambda = 0;  // > 0 in the (lambda,eps,sign) form
    double eps = 0;     // >= 0
    int sign = +1;
    cplx z{0.0, 0.0};
    cplx sqrt_z{0.0, 0.0};
};

SpectralParam spectral_param(double lambda, double eps, int sign);

/// Arbitrary spectral point (e.g. z = -1, or z = (lambda + i eps)^2).
SpectralParam spectral_param_from_z(cplx z);

/// Free-space kernel e^{i sqrt(z) r} / (4 pi r). Requires r > 0.
cplx kernel_value(double r, const SpectralParam& sp);

/// Frequency-side application of the inverse symbol 1/(|xi|^2 - z). Output
/// comes back in the domain of the input and satisfies the grid identity
/// (-Laplacian - z) u = f exactly. eps = 0 is allowed only when z keeps a
/// distance >= 1e-6 freq_step^2 from every lattice |xi|^2.
Field apply_free_resolvent(const Field& f, const SpectralParam& sp);

/// Kernel-summation oracle, independent of apply_free_resolvent: convolves f
/// with the image-summed kernel sum_m K(|x - y + L m|). The sum is split by a
/// smooth radial cutoff at 0.45 L; the near part is tabulated on an 8x
/// refined torus (singular cell = exact ball average of the kernel integral)
/// and applied to the zero-pad upsampled f, the smooth far part on a 2x
/// torus. Tables are cached per (n, L, z). Preconditions: n <= 24, Im z > 0,
/// and e^{-Im sqrt(z) L} <= 0.15 so the image sum converges.
Field apply_free_resolvent_direct(const Field& f, const SpectralParam& sp);

/// [R0(lambda^2 + i eps) - R0(lambda^2 - i eps)] f evaluated on a decreasing
/// eps ladder (>= 3 entries) and polynomial-extrapolated to eps -> 0.
/// Throws if the successive differences grow instead of shrinking.
Field resolvent_jump(const Field& f, double lambda, const std::vector<double>& eps_seq);

/// min over the lattice of | |xi|^2 - z |, the exact 2->2 resolvent bound.
double lattice_spectral_distance(const Grid3& grid, cplx z);

}  // namespace rlab
