#pragma once

#include <functional>
#include <vector>

#include "rlab/fit.hpp"
#include "rlab/grid.hpp"
#include "rlab/potential.hpp"
#include "rlab/resolvent.hpp"

namespace rlab {

/// A(z) f = R0(z) (V f).
Field apply_birman_schwinger(const Field& f, const Potential& V, const SpectralParam& z);

struct KrylovResult {
    Field solution;
    int iterations = 0;   // operator applications inside Arnoldi cycles
    double residual = 0;  // final relative residual ||b - op(x)|| / ||b||
    bool converged = false;
};

/// Restarted GMRES for op(x) = b, zero initial guess, explicit residual
/// recomputed at every restart so the convergence flag is trustworthy.
/// Never throws on stagnation; callers decide.
KrylovResult krylov_solve(const std::function<Field(const Field&)>& op, const Field& b,
                          double tol, int restart = 50, int max_iters = 2000);

struct SolveStats {
    int iterations = 0;
    double residual = 0;
};

/// u = (I + R0(z) V)^{-1} R0(z) f, i.e. the perturbed resolvent applied to f.
/// Enforces ||u + A u - R0 f||_2 <= tol ||R0 f||_2; V = 0 returns R0 f with
/// zero iterations. Throws std::runtime_error when the iteration cap is hit
/// (near-singular I + A: a resonance, bound state, or eps too small), with
/// the best residual in the message.
Field solve_resolvent(const Field& f, const Potential& V, const SpectralParam& z,
                      double tol, SolveStats* stats = nullptr);

/// ||(-Delta + V - z) u - f||_2 / ||f||_2, Laplacian applied spectrally.
double pde_residual(const Field& u, const Field& f, const Potential& V,
                    const SpectralParam& z);

/// Boundary pairing Im <R0((lambda + i eps)^2) g, g> extrapolated to eps = 0
/// and compared with the sphere restriction of g:
///   limit ~ c * restriction_value,  restriction_value = lambda ||g_hat(lambda .)||^2
/// (L^2 of the normalised-measure sphere samples). Each rung is divided by a
/// matched Lorentzian average of the radial trace rho ||g_hat(rho .)||^2, so
/// the radial profile of g cancels and the extrapolated ratio carries only
/// angular noise; with this convention the continuum constant is 1/(4 pi).
struct ImagPairingResult {
    double limit = 0;
    double restriction_value = 0;
    double c = 0;
    std::vector<double> eps;
    std::vector<double> rung_values;  // Im pairing per rung, all positive
};

/// eps_seq: >= 3 positive strictly decreasing entries, all >= 4/L (the
/// kernel decay length at (lambda + i eps)^2 is 1/eps, so smaller eps wraps).
/// lambda must sit well inside the lattice band. Throws on extrapolation
/// divergence.
ImagPairingResult imag_pairing(const Field& g, double lambda,
                               const std::vector<double>& eps_seq);

/// Lower bounds of || R_V(lambda^2 (1 + i eps)) ||_{4/3 -> 4} by power
/// iteration through the solver at each lambda, fitted against lambda. The
/// spectral point scales as lambda^2 (1 + i eps), whose continuum norm is
/// exactly lambda^{-1/2} times a lambda-independent constant, so the fit
/// probes lattice fidelity rather than damping artifacts. Needs eps >= 8/L
/// at lambda = 1 for the kernel decay to stay inside the box. Solver
/// failures are rethrown with the offending lambda in the message.
ScalingFit agmon_scaling_experiment(const Potential& V, const std::vector<double>& lambdas,
                                    double eps, int trials);

}  // namespace rlab
