#pragma once

#include <cstdint>
#include <vector>

#include "rlab/grid.hpp"
#include "rlab/kernels.hpp"

namespace rlab {

/// One angular sector of the unit shell: a centre direction with an
/// orthonormal tangent frame. angular_width is the half-support of the
/// cutoff in tangent coordinates (~ R^{-1/2}), radial_width = 1/R; the
/// sector footprint is angular_width x angular_width x radial_width.
struct Cap {
    Vec3 center{};
    Vec3 t1{}, t2{};
    double angular_width = 0;
    double radial_width = 0;
};

/// Smooth partition of the shell { ||xi|-1| < 1/R } into ~ 4 pi R caps.
/// Centres sit on a Fibonacci spiral at typical separation ~ R^{-1/2}.
/// The angular weight of a cap is a product of the shared plateau profile
/// in its tangent-frame coordinates, normalised over all caps so the
/// weights sum to exactly one wherever the sphere is covered; the radial
/// window is the same profile at scale 1/R. Construction samples the shell
/// and fails if coverage, overlap (> 12 caps above weight 0.01) or the
/// count bound [R/4, 16R] is violated.
struct CapDecomposition {
    double R = 1;
    double spacing = 0;  // mean centre separation, sqrt(4 pi / count)
    double width = 0;    // angular cutoff half-support in tangent coords
    std::vector<Cap> caps;

    /// Normalised smooth weight of cap alpha at frequency xi, radial
    /// window included. Scans all caps to normalise, so it is meant for
    /// spot checks and mode-sized loops, not per-sample hot paths.
    double cutoff(std::size_t alpha, const Vec3& xi) const;
};

CapDecomposition make_caps(double R);

/// Frequency annulus piece of f around the unit sphere. With t = R(|xi|-1)
/// and P the plateau profile, the k = 0 multiplier is P(t) (support
/// ||xi|-1| < 1/R) and for k >= 1 it is P(t/2^k) - P(t/2^(k-1)) (support
/// ||xi|-1| ~ 2^k/R). Shells stop once their reach exceeds ~1/2; beyond
/// shell_count(R)-1 the result is zero. Output stays in the input domain.
Field shell_project(const Field& f, int k, double R);

/// Number of active shells: k = 0 .. shell_count(R)-1 are nonzero.
int shell_count(double R);

/// f minus every active shell, i.e. the multiplier 1 - P(t/2^K) with
/// K = shell_count(R)-1. The shells plus this remainder reproduce f.
Field shell_remainder(const Field& f, double R);

/// Both sides of the cap square-function inequalities at scale R.
/// g is f pre-projected onto the shell and split over caps as g = sum g_a:
///   lhs_g2 = ||g||_4                vs  rhs_g2 = R^(1/8) ||(sum|g_a|^2)^(1/2)||_4
///   lhs_f2 = ||(sum|g_a|^2)^(1/2)||_{4/3}  vs  rhs_f2 = R^(1/8) ||f||_{4/3}
/// The interesting quantities are the ratios lhs/rhs, which should stay
/// bounded as R grows. Throws if f carries no spectral mass on the shell.
struct SquareFunctionResult {
    double lhs_g2 = 0, rhs_g2 = 0;
    double lhs_f2 = 0, rhs_f2 = 0;
};

SquareFunctionResult square_function_check(const Field& f, double R);

/// Monte Carlo probe of the discrete extension bound
///   || sum_a c_a e^{i x . xi_a} ||_{L^4(Q)}  <=  C R^{1/2} (sum |c_a|^2)^{1/2}
/// over the cube Q of side sqrt(R), with nodes the R^{-1/2}-separated cap
/// centres of make_caps(R). Each trial keeps a random subset of nodes with
/// complex Gaussian coefficients; all_ones_ratio uses every node with
/// c_a = 1, which is the near-extremal configuration.
struct ExtensionCheck {
    double max_ratio = 0;       // max over trials of lhs / (R^(1/2) l2)
    double all_ones_ratio = 0;
};

ExtensionCheck discrete_extension_check(double R, int trials, std::uint64_t seed);

/// Smooth frequency bump on the single cap of scale R at `direction`:
/// plateau products of half-width R^{-1/2} in the tangent coordinates and
/// 1/R radially. The position profile is the dual tube, R long in
/// `direction` and sqrt(R) across, so ||f||_2 / ||f||_{4/3} ~ c R^{-1/2};
/// construction verifies that relation within a factor of two. Requires
/// R <= L/4 so the tube fits, and a grid band edge above the shell.
Field knapp_field(double R, const Vec3& direction, const Grid3& grid);

/// || chi_{|x|<R} R0(1 + i eps) f ||_2 with a sharp ball cutoff.
/// Requires R <= L/4 and eps >= 4/L.
double localized_resolvent_norm(const Field& f, double R, double eps);

/// Max over random localised trial fields of
///   || chi_{|x|<R} extend(restrict(f, 1)) ||_2 / (sqrt(R) ||f||_{4/3}),
/// on an internally built box of length 4R. Deterministic in (R, trials).
double local_extension_norm_check(double R, int trials);

/// 2->2 norm of chi_{|x|<R} R0(1 + i eps) chi_{|x-v|<R}, estimated by
/// power iteration on T*T. Ball membership uses nearest-image (periodic)
/// distances; requires R <= L/4, |v|_inf <= L/2 and eps >= 4/L. Expected
/// to decay like R (1 + |v|/R)^{-1} as the balls separate.
double local_bilinear_norm(double R, const Vec3& v, double eps, const Grid3& grid);

}  // namespace rlab
