#include "rlab/perturbed.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "rlab/fft.hpp"
#include "rlab/norms.hpp"
#include "rlab/opnorm.hpp"
#include "rlab/sphere.hpp"

namespace rlab {

namespace {

double max_abs(const Field& f) {
    double m = 0.0;
    for (const auto& z : f.values) m = std::max(m, std::abs(z));
    return m;
}

Field to_domain(const Field& f, Domain d) {
    return f.domain == d ? f : transform(f, d);
}

}  // namespace

Field apply_birman_schwinger(const Field& f, const Potential& V, const SpectralParam& z) {
    Field vf = multiply(V, to_domain(f, Domain::Position));
    return apply_free_resolvent(vf, z);
}

KrylovResult krylov_solve(const std::function<Field(const Field&)>& op, const Field& b,
                          double tol, int restart, int max_iters) {
    if (!(tol > 0.0)) throw std::invalid_argument("krylov_solve: tol must be > 0");
    if (restart < 1 || max_iters < 1)
        throw std::invalid_argument("krylov_solve: restart and max_iters must be >= 1");

    KrylovResult out{Field(b.grid, b.domain), 0, 0.0, false};
    double bnorm = lp_norm(b, 2.0);
    if (bnorm == 0.0) {
        out.converged = true;
        return out;
    }
    Field& x = out.solution;

    while (true) {
        // explicit residual; the rotated-rhs estimate inside Arnoldi can
        // drift across restarts
        Field r = op(x);
        for (std::size_t i = 0; i < r.values.size(); ++i)
            r.values[i] = b.values[i] - r.values[i];
        double rnorm = lp_norm(r, 2.0);
        out.residual = rnorm / bnorm;
        if (out.residual <= tol) {
            out.converged = true;
            return out;
        }
        if (out.iterations >= max_iters) return out;

        int m = std::min(restart, max_iters - out.iterations);
        std::vector<Field> basis;
        basis.reserve(m + 1);
        {
            Field v0 = r;
            for (auto& z : v0.values) z /= rnorm;
            basis.push_back(std::move(v0));
        }
        std::vector<std::vector<cplx>> H(m + 1, std::vector<cplx>(m, cplx(0, 0)));
        std::vector<double> cs(m, 1.0);
        std::vector<cplx> sn(m, cplx(0, 0));
        std::vector<cplx> g(m + 1, cplx(0, 0));
        g[0] = rnorm;

        int k = 0;
        for (; k < m; ++k) {
            Field w = op(basis[k]);
            ++out.iterations;
            for (int j = 0; j <= k; ++j) {
                cplx hjk = inner(w, basis[j]);
                H[j][k] = hjk;
                for (std::size_t i = 0; i < w.values.size(); ++i)
                    w.values[i] -= hjk * basis[j].values[i];
            }
            double wnorm = lp_norm(w, 2.0);
            H[k + 1][k] = wnorm;

            // previous Givens rotations on the new column
            for (int j = 0; j < k; ++j) {
                cplx a = H[j][k], c = H[j + 1][k];
                H[j][k] = cs[j] * a + sn[j] * c;
                H[j + 1][k] = -std::conj(sn[j]) * a + cs[j] * c;
            }
            // new rotation eliminating H[k+1][k]
            {
                cplx a = H[k][k];
                double c2 = std::abs(H[k + 1][k]);
                double t = std::hypot(std::abs(a), c2);
                if (t == 0.0) {
                    cs[k] = 1.0;
                    sn[k] = 0.0;
                } else if (std::abs(a) == 0.0) {
                    cs[k] = 0.0;
                    sn[k] = 1.0;
                } else {
                    cs[k] = std::abs(a) / t;
                    sn[k] = (a / std::abs(a)) * std::conj(H[k + 1][k]) / t;
                }
                H[k][k] = cs[k] * a + sn[k] * H[k + 1][k];
                H[k + 1][k] = 0.0;
                g[k + 1] = -std::conj(sn[k]) * g[k];
                g[k] = cs[k] * g[k];
            }

            bool happy = wnorm < 1e-14 * bnorm;
            bool small = std::abs(g[k + 1]) / bnorm <= 0.5 * tol;
            if (!happy) {
                Field v = std::move(w);
                for (auto& z : v.values) z /= wnorm;
                basis.push_back(std::move(v));
            }
            if (happy || small || out.iterations >= max_iters) {
                ++k;
                break;
            }
        }

        // back-substitution and solution update
        std::vector<cplx> y(k, cplx(0, 0));
        for (int i = k - 1; i >= 0; --i) {
            cplx s = g[i];
            for (int j = i + 1; j < k; ++j) s -= H[i][j] * y[j];
            y[i] = s / H[i][i];
        }
        for (int j = 0; j < k; ++j)
            for (std::size_t i = 0; i < x.values.size(); ++i)
                x.values[i] += y[j] * basis[j].values[i];
    }
}

Field solve_resolvent(const Field& f, const Potential& V, const SpectralParam& z,
                      double tol, SolveStats* stats) {
    if (!(tol > 0.0)) throw std::invalid_argument("solve_resolvent: tol must be > 0");
    if (!(std::abs(z.z.imag()) > 0.0))
        throw std::invalid_argument("solve_resolvent: z must sit off the real axis");
    require_same_grid(V.values, f, "solve_resolvent");

    // the Krylov loop runs in the position domain regardless of f's domain
    Field b = to_domain(apply_free_resolvent(f, z), Domain::Position);
    if (max_abs(V.values) == 0.0) {
        if (stats) *stats = {0, 0.0};
        return b;
    }

    auto op = [&](const Field& u) {
        Field w = to_domain(apply_birman_schwinger(u, V, z), Domain::Position);
        for (std::size_t i = 0; i < w.values.size(); ++i) w.values[i] += u.values[i];
        return w;
    };
    KrylovResult kr = krylov_solve(op, b, tol, 50, 2000);
    if (stats) *stats = {kr.iterations, kr.residual};
    if (!kr.converged) {
        std::ostringstream msg;
        msg << "solve_resolvent: no convergence in " << kr.iterations
            << " iterations (near-singular I + A: resonance, bound state, or eps too "
               "small); best residual "
            << kr.residual;
        throw std::runtime_error(msg.str());
    }
    return kr.solution;
}

double pde_residual(const Field& u, const Field& f, const Potential& V,
                    const SpectralParam& z) {
    require_same_grid(u, f, "pde_residual");
    const Grid3& g = u.grid;
    Field uh = to_domain(u, Domain::Frequency);
    for (int a = 0; a < g.n; ++a)
        for (int b = 0; b < g.n; ++b)
            for (int c = 0; c < g.n; ++c) {
                double xa = g.xi(a), xb = g.xi(b), xc = g.xi(c);
                uh.at(a, b, c) *= xa * xa + xb * xb + xc * xc;
            }
    Field lap = transform(uh, Domain::Position);
    Field up = to_domain(u, Domain::Position);
    Field fp = to_domain(f, Domain::Position);
    Field res(g, Domain::Position);
    for (std::size_t i = 0; i < res.values.size(); ++i)
        res.values[i] = lap.values[i] + V.values.values[i].real() * up.values[i] -
                        z.z * up.values[i] - fp.values[i];
    return lp_norm(res, 2.0) / lp_norm(fp, 2.0);
}

ImagPairingResult imag_pairing(const Field& g, double lambda,
                               const std::vector<double>& eps_seq) {
    const Grid3& grid = g.grid;
    if (!(lambda > 0.0)) throw std::invalid_argument("imag_pairing: lambda must be > 0");
    double band = grid.freq_step * (grid.n / 2);
    if (!(lambda <= 0.8 * band))
        throw std::invalid_argument("imag_pairing: lambda too close to the lattice band edge");
    if (eps_seq.size() < 3)
        throw std::invalid_argument("imag_pairing: need >= 3 ladder entries");
    for (std::size_t i = 0; i < eps_seq.size(); ++i) {
        if (!(eps_seq[i] > 0.0))
            throw std::invalid_argument("imag_pairing: eps must be positive");
        if (i > 0 && !(eps_seq[i] < eps_seq[i - 1]))
            throw std::invalid_argument("imag_pairing: eps ladder must decrease");
        if (eps_seq[i] < 4.0 / grid.length - 1e-12)
            throw std::invalid_argument("imag_pairing: eps below the wraparound floor 4/L");
    }

    SphereQuadrature quad = sphere_quadrature(256);
    Field gp = to_domain(g, Domain::Position);
    double l2g = lp_norm(gp, 2.0);
    if (l2g == 0.0) throw std::invalid_argument("imag_pairing: zero field");

    double t_lambda = sphere_l2(restrict(gp, lambda, quad));
    ImagPairingResult out;
    out.eps = eps_seq;
    out.restriction_value = lambda * t_lambda * t_lambda;

    const double rho_lo = std::max(0.15 * lambda, 0.05);
    const double rho_hi = 0.98 * band;
    const int nth = 24;

    std::vector<double> ratio;
    for (double eps : eps_seq) {
        SpectralParam sp = spectral_param_from_z(cplx(lambda * lambda - eps * eps,
                                                      2.0 * lambda * eps));
        double num = inner(apply_free_resolvent(gp, sp), gp).imag();
        out.rung_values.push_back(num);
        if (!(num > 0.0))
            throw std::runtime_error("imag_pairing: nonpositive pairing rung");

        // matched Lorentzian average of the radial trace: substitute
        // u = rho^2 = (lambda^2 - eps^2) + 2 lambda eps tan(theta) so the
        // weight 2 lambda eps / ((u - u0)^2 + (2 lambda eps)^2) flattens
        double u0 = lambda * lambda - eps * eps;
        double hw = 2.0 * lambda * eps;
        double th_lo = std::atan((rho_lo * rho_lo - u0) / hw);
        double th_hi = std::atan((rho_hi * rho_hi - u0) / hw);
        double dth = (th_hi - th_lo) / nth, den = 0.0;
        for (int k = 0; k < nth; ++k) {
            double u = u0 + hw * std::tan(th_lo + (k + 0.5) * dth);
            double rho = std::sqrt(u);
            double t = sphere_l2(restrict(gp, rho, quad));
            den += 0.5 * rho * (4.0 * kPi * t * t) * dth;
        }
        den /= 8.0 * kPi * kPi * kPi;  // (2 pi)^{-3} continuum normalisation
        if (!(den > 0.0)) throw std::runtime_error("imag_pairing: empty trace ladder");
        ratio.push_back(num / den);
    }

    // Neville tableau at eps = 0
    std::vector<double> t = ratio;
    for (std::size_t j = 1; j < t.size(); ++j)
        for (std::size_t i = 0; i + j < t.size(); ++i) {
            double xi = eps_seq[i], xj = eps_seq[i + j];
            t[i] = (xj * t[i] - xi * t[i + 1]) / (xj - xi);
        }
    double r0 = t[0];
    double rung_gap = std::abs(ratio[1] - ratio[0]);
    if (std::abs(r0 - ratio.back()) > 4.0 * (rung_gap + 0.25 * std::abs(ratio.back())))
        throw std::runtime_error("imag_pairing: extrapolation diverged");

    out.c = r0 / (4.0 * kPi);
    out.limit = out.c * out.restriction_value;
    return out;
}

ScalingFit agmon_scaling_experiment(const Potential& V, const std::vector<double>& lambdas,
                                    double eps, int trials) {
    if (lambdas.size() < 3)
        throw std::invalid_argument("agmon_scaling_experiment: need >= 3 lambdas");
    if (!(eps > 0.0)) throw std::invalid_argument("agmon_scaling_experiment: eps must be > 0");
    if (trials < 1) throw std::invalid_argument("agmon_scaling_experiment: trials must be >= 1");

    const Grid3& grid = V.values.grid;
    const double solver_tol = 1e-6;
    std::vector<double> vals;
    for (double lam : lambdas) {
        // spectral point lambda^2 (1 + i eps): the smearing relative to the
        // shell radius is lambda-independent, so in the continuum the norm
        // scales exactly like lambda^{-1/2} times a fixed constant and the
        // lattice is the only source of deviation. A fixed absolute eps would
        // overdamp small lambda and flatten the fit.
        SpectralParam up = spectral_param(lam, eps * lam * lam, +1);
        SpectralParam dn = spectral_param(lam, eps * lam * lam, -1);
        LinearOperator op;
        op.apply = [&V, up, solver_tol](const Field& f) {
            return solve_resolvent(f, V, up, solver_tol);
        };
        op.apply_adjoint = [&V, dn, solver_tol](const Field& f) {
            return solve_resolvent(f, V, dn, solver_tol);
        };
        try {
            OpNormEstimate est =
                estimate_opnorm(op, grid, 4.0 / 3.0, 4.0, 10, trials, 0x46AB5);
            vals.push_back(est.lower_bound);
        } catch (const std::runtime_error& e) {
            std::ostringstream msg;
            msg << "agmon_scaling_experiment: lambda = " << lam << ": " << e.what();
            throw std::runtime_error(msg.str());
        }
    }
    return fit_power_law(lambdas, vals);
}

}  // namespace rlab
