#pragma once

#include <array>
#include <functional>

#include "rlab/grid.hpp"

namespace rlab {

using Vec3 = std::array<double, 3>;

/// Exact semi-discrete transform of position samples at arbitrary frequency
/// points: out_j = h^3 sum_x f(x) e^{-i p_j . x}. Tensor-factored per point,
/// OpenMP over points.
std::vector<cplx> nudft_forward(const Field& f, const std::vector<Vec3>& points);

/// Adjoint of nudft_forward with quadrature weights:
/// u(x) = sum_j w_j s_j e^{+i p_j . x}.
Field nudft_adjoint(const Grid3& grid, const std::vector<Vec3>& points,
                    const std::vector<double>& weights, const std::vector<cplx>& s);

/// Direct-space convolution with a radial kernel over true (non-periodic)
/// displacements: u(x) = h^3 sum_{y != x} K(|x-y|) f(y) + self_coeff f(x).
/// The kernel is tabulated on the (2n-1)^3 offset cube once, then applied.
Field radial_convolution(const Field& f, const std::function<cplx(double)>& kernel,
                         cplx self_coeff);

/// L^4 norm over the cube [-side/2, side/2]^3 of E(x) = sum_j c_j e^{i x.p_j},
/// by the midpoint rule with the given step (clamped so the cell count is an
/// integer). Returns (sum |E|^4 cell_volume)^(1/4).
double expsum_l4_cube(const std::vector<Vec3>& points, const std::vector<cplx>& coef,
                      double side, double step);

/// Pointwise frequency-symbol application: fh(xi) *= symbol(xi).
void apply_symbol(Field& freq_field, const std::function<cplx(const Vec3&)>& symbol);

namespace serial {
std::vector<cplx> nudft_forward(const Field& f, const std::vector<Vec3>& points);
Field nudft_adjoint(const Grid3& grid, const std::vector<Vec3>& points,
                    const std::vector<double>& weights, const std::vector<cplx>& s);
Field radial_convolution(const Field& f, const std::function<cplx(double)>& kernel,
                         cplx self_coeff);
double expsum_l4_cube(const std::vector<Vec3>& points, const std::vector<cplx>& coef,
                      double side, double step);
}  // namespace serial

}  // namespace rlab
