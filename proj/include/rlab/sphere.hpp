#pragma once

#include "rlab/grid.hpp"
#include "rlab/kernels.hpp"

namespace rlab {

/// Equal-weight Fibonacci-spiral quadrature on S^2 with normalised measure
/// (weights sum to 1). Constructed nodes must integrate all spherical
/// harmonics of degree <= 2 to within 1e-3; construction fails otherwise.
struct SphereQuadrature {
    std::vector<Vec3> nodes;
    std::vector<double> weights;
    std::size_t size() const { return nodes.size(); }
};

SphereQuadrature sphere_quadrature(int m);

/// Samples of a semi-discrete transform on the sphere radius * S^2.
struct SphereSamples {
    double radius = 0;
    SphereQuadrature quad;
    std::vector<cplx> values;
};

/// L^2(S^2, normalised measure) norm of the samples.
double sphere_l2(const SphereSamples& s);

/// values_j = f_hat(radius * omega_j) by exact semi-discrete summation.
SphereSamples restrict(const Field& f, double radius, const SphereQuadrature& quad);

/// u(x) = sum_j w_j s_j e^{i radius omega_j . x}; exact adjoint of restrict
/// under the h^3 / normalised-measure pairings.
Field extend(const SphereSamples& s, const Grid3& grid);

/// Trace function of f at lambda by two routes:
///  spectral: 4 pi sum_j w_j |f_hat(lambda omega_j)|^2   (normalised measure)
///  kernel:   4 pi h^6 sum_{x,y} f(x) sinc(lambda |x-y|) conj(f(y))
/// kernel_imag records the imaginary part left over by the Hermitian double
/// sum. The kernel route sums true (non-periodic) displacements, so f must
/// sit in the middle half of the box; n <= 24 keeps the O(n^6) cost sane.
/// Violations throw.
struct TraceG {
    double spectral = 0;
    double kernel = 0;
    double kernel_imag = 0;
};

TraceG trace_G(const Field& f, double lambda, const SphereQuadrature& quad);

/// f = (-Laplacian - 1) g via the lattice symbol (|xi|^2 - 1), so the
/// semi-discrete transform of f vanishes on the unit sphere up to aliasing.
Field vanishing_testfn(const Field& g);

/// Restriction growth off the unit sphere for f with f_hat = 0 on it:
/// table of ||f_hat((1+delta) .)||_{L^2(S^2)} over the given deltas plus
/// local log-slopes, compared against gamma = 2/p - 3/2.
struct HolderResult {
    double gamma = 0;
    std::vector<double> deltas;
    std::vector<double> values;
    std::vector<double> slopes;  // between consecutive deltas
    bool slopes_ok = false;      // every slope >= gamma - 0.05
};

/// Requires 1 <= p < 4/3 and ||restrict(f,1)|| <= 1e-6 ||f||_2.
HolderResult holder_check(const Field& f, double p, const std::vector<double>& deltas,
                          const SphereQuadrature& quad);

/// Weighted-resolvent ladder: rows (eps, ||(1+|x|)^{delta-1/2} R0(1+i eps) f||_2)
/// for the decreasing eps ladder. stabilized: last two entries within 5%;
/// growth = last value / first value.
struct WeightedLadder {
    std::vector<double> eps;
    std::vector<double> values;
    bool stabilized = false;
    double growth = 0;
};

/// Requires 1 <= p < 4/3 and 0 < delta < 1/2 - 2/p'.
WeightedLadder agmon_weighted_check(const Field& f, double p, double delta,
                                    const std::vector<double>& eps_seq);

/// Proportionality constant between the resolvent boundary jump and the
/// sphere extension: [R0(lambda^2+i0) - R0(lambda^2-i0)] f = i c extend(
/// restrict(f, lambda)). Per rung c(eps) = Im<(R+ - R-)f, f> / D(eps) where
/// D(eps) applies the same Lorentzian profile 2 eps / ((rho^2-lambda^2)^2 +
/// eps^2) to the node-sampled radial trace T(rho) = ||restrict(f, rho)||^2,
/// so the radial shape of |f_hat|^2 near the shell cancels between numerator
/// and denominator and only angular sampling noise survives. c_fit is the
/// polynomial extrapolation of the rungs to eps = 0; the continuum value is
/// lambda / (2 pi).
struct JumpFit {
    std::vector<double> eps;
    std::vector<double> c;  // matched ratio per rung
    double c_fit = 0;
};

/// Ladder rules follow resolvent_jump (>= 3 entries, positive, strictly
/// decreasing) plus the wraparound floor eps >= 4 lambda / L. f must be a
/// nonzero position field supported in the middle half of the box with
/// f_hat not vanishing on the lambda-sphere, and lambda must sit well inside
/// the lattice band.
JumpFit jump_constant_fit(const Field& f, double lambda, const std::vector<double>& eps_seq,
                          const SphereQuadrature& quad);

}  // namespace rlab
