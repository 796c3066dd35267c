#pragma once

#include "rlab/grid.hpp"

namespace rlab {

/// Fourier transform of the resolvent-modulus multiplier
/// lambda^2 / |lambda^2 - (1 + i eps)|^2, in closed form:
/// (pi/2eps) (sqrt(1+i eps) e^{i|tau| sqrt(1+i eps)} + conjugate term).
/// Real-valued, even in tau. Requires eps > 0.
cplx m_eps_hat(double tau, double eps);

/// The same quantity by direct quadrature of int lambda^2/|lambda^2-(1+i eps)|^2
/// e^{i lambda tau} d lambda: adaptive Simpson out to lambda = 40, then the
/// remainder integrated along the rotated ray 40 + i t where the oscillation
/// turns into decay. Independent cross-check of m_eps_hat.
cplx m_eps_hat_oracle(double tau, double eps);

/// Residual of the two-sided L2 identity at z = 1 + i eps:
///   | ||R0 f||_2^2 - G(1)/(16 pi^2 eps) |  <=  ||f||_1^2 / (8 pi),
/// where G(1) is the squared L2 trace of the transform of f on the unit
/// sphere. Returns lhs/rhs, so values <= 1 (plus discretization slack) mean
/// the inequality holds. Requires f supported in the middle half of the box
/// (2% L1 leakage allowed) and eps >= 4/L.
double g_identity_check(const Field& f, double eps);

/// max over eps (both signs of the imaginary part) of ||R0(1 +- i eps) f||_2
/// / ||f||_1 for f whose transform vanishes on the unit sphere; the sharp
/// continuum bound is (8 pi)^{-1/2}. Throws if the sphere trace of f exceeds
/// 1e-6 ||f||_2, if f leaks out of the middle half of the box, or if any
/// eps < 4/L.
double endpoint_bound_check(const Field& f, const std::vector<double>& eps_sequence);

/// Per-eps ratios behind endpoint_bound_check (max over the two signs), for
/// reporting the eps -> 0 trend. Same preconditions.
std::vector<double> endpoint_ratios(const Field& f, const std::vector<double>& eps_sequence);

}  // namespace rlab
