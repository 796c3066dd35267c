#include "rlab/caps.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "rlab/fft.hpp"
#include "rlab/norms.hpp"
#include "rlab/opnorm.hpp"
#include "rlab/profile.hpp"
#include "rlab/random_fields.hpp"
#include "rlab/resolvent.hpp"
#include "rlab/sphere.hpp"

namespace rlab {

namespace {

// Angular cutoff half-support as a multiple of the mean centre spacing.
// Large enough that the plateau regions overlap the Fibonacci covering
// radius (no gaps), small enough that <= 12 caps are active anywhere.
constexpr double kWidthFactor = 1.35;

double dot3(const Vec3& a, const Vec3& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

Vec3 cross3(const Vec3& a, const Vec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0]};
}

double norm3(const Vec3& a) { return std::sqrt(dot3(a, a)); }

Vec3 scaled(const Vec3& a, double s) { return {a[0] * s, a[1] * s, a[2] * s}; }

// Evenly spread unit vectors on the golden-angle spiral. Not a quadrature,
// just well-separated directions, so any m >= 1 is fine.
std::vector<Vec3> fibonacci_directions(int m) {
    const double golden = kPi * (3.0 - std::sqrt(5.0));
    std::vector<Vec3> dirs(m);
    for (int j = 0; j < m; ++j) {
        double z = 1.0 - (2.0 * j + 1.0) / m;
        double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        double th = golden * j;
        dirs[j] = {r * std::cos(th), r * std::sin(th), z};
    }
    return dirs;
}

// Orthonormal tangent frame at unit vector c.
void tangent_frame(const Vec3& c, Vec3& t1, Vec3& t2) {
    int least = 0;
    for (int i = 1; i < 3; ++i)
        if (std::abs(c[i]) < std::abs(c[least])) least = i;
    Vec3 e{0, 0, 0};
    e[least] = 1.0;
    t1 = cross3(e, c);
    t1 = scaled(t1, 1.0 / norm3(t1));
    t2 = cross3(c, t1);
}

// Unnormalised angular weight of one cap at unit direction omega: plateau
// profile products in the tangent coordinates, zero on the far hemisphere.
double raw_angular(const Cap& cap, double width, const Vec3& omega) {
    double d = dot3(omega, cap.center);
    if (d <= 0.0) return 0.0;
    double u1 = dot3(omega, cap.t1);
    double u2 = dot3(omega, cap.t2);
    if (std::abs(u1) >= width || std::abs(u2) >= width) return 0.0;
    return smooth_profile(u1 / width) * smooth_profile(u2 / width);
}

double radial_window(double rho, double R) { return smooth_profile(R * (rho - 1.0)); }

struct AngularScan {
    double denom = 0;  // sum of raw weights
    int active = 0;    // caps whose normalised weight exceeds 0.01
};

AngularScan scan_caps(const CapDecomposition& d, const Vec3& omega) {
    AngularScan s;
    std::vector<double> raw;
    raw.reserve(16);
    for (const Cap& cap : d.caps) {
        double w = raw_angular(cap, d.width, omega);
        if (w > 0.0) raw.push_back(w);
    }
    for (double w : raw) s.denom += w;
    if (s.denom > 0.0)
        for (double w : raw)
            if (w / s.denom > 0.01) ++s.active;
    return s;
}

Field to_domain(const Field& f, Domain d) {
    return f.domain == d ? f : transform(f, d);
}

// Dyadic radial multiplier: k = 0 is P(t), k >= 1 is P(t/2^k) - P(t/2^(k-1)),
// with t = R(|xi|-1).
double shell_multiplier(double t, int k) {
    if (k == 0) return smooth_profile(t);
    double sc = std::ldexp(1.0, -k);  // 2^-k
    return smooth_profile(t * sc) - smooth_profile(t * sc * 2.0);
}

Field apply_radial(const Field& f, double R, const std::function<double(double)>& mult) {
    Field fh = to_domain(f, Domain::Frequency);
    const Grid3& g = fh.grid;
#pragma omp parallel for schedule(static)
    for (int a = 0; a < g.n; ++a)
        for (int b = 0; b < g.n; ++b)
            for (int c = 0; c < g.n; ++c) {
                double xa = g.xi(a), xb = g.xi(b), xc = g.xi(c);
                double rho = std::sqrt(xa * xa + xb * xb + xc * xc);
                fh.at(a, b, c) *= mult(R * (rho - 1.0));
            }
    return to_domain(fh, f.domain);
}

double ball_l2(const Field& u, double R) {
    const Grid3& g = u.grid;
    double r2 = R * R;
    std::vector<double> partial(g.n, 0.0);
#pragma omp parallel for schedule(static)
    for (int a = 0; a < g.n; ++a) {
        double acc = 0.0, xa = g.x(a);
        for (int b = 0; b < g.n; ++b) {
            double xb = g.x(b);
            double ab = xa * xa + xb * xb;
            if (ab >= r2) continue;
            for (int c = 0; c < g.n; ++c) {
                double xc = g.x(c);
                if (ab + xc * xc < r2) acc += std::norm(u.at(a, b, c));
            }
        }
        partial[a] = acc;
    }
    double h3 = u.grid.h * u.grid.h * u.grid.h;
    return std::sqrt(ordered_sum(partial) * h3);
}

Field sharp_ball_mask(const Field& f, const Vec3& center, double R) {
    Field out = f;
    const Grid3& g = f.grid;
    double r2 = R * R;
    double L = g.length;
    auto wrap = [L](double d) { return d - L * std::round(d / L); };
#pragma omp parallel for schedule(static)
    for (int a = 0; a < g.n; ++a) {
        double da = wrap(g.x(a) - center[0]);
        for (int b = 0; b < g.n; ++b) {
            double db = wrap(g.x(b) - center[1]);
            for (int c = 0; c < g.n; ++c) {
                double dc = wrap(g.x(c) - center[2]);
                if (da * da + db * db + dc * dc >= r2) out.at(a, b, c) = cplx(0.0, 0.0);
            }
        }
    }
    return out;
}

}  // namespace

double CapDecomposition::cutoff(std::size_t alpha, const Vec3& xi) const {
    if (alpha >= caps.size()) throw std::invalid_argument("cap cutoff: alpha out of range");
    double rho = norm3(xi);
    if (rho < 1e-12) return 0.0;
    double rad = radial_window(rho, R);
    if (rad == 0.0) return 0.0;
    Vec3 omega = scaled(xi, 1.0 / rho);
    double mine = raw_angular(caps[alpha], width, omega);
    if (mine == 0.0) return 0.0;
    double denom = 0.0;
    for (const Cap& cap : caps) denom += raw_angular(cap, width, omega);
    return rad * mine / denom;
}

CapDecomposition make_caps(double R) {
    if (!(R >= 1.0)) throw std::invalid_argument("make_caps: R must be >= 1");
    const int m = int(std::ceil(4.0 * kPi * R));
    if (m < std::ceil(R / 4.0) || m > 16.0 * R)
        throw std::runtime_error("make_caps: cap count outside [R/4, 16R]");

    CapDecomposition d;
    d.R = R;
    d.spacing = std::sqrt(4.0 * kPi / m);
    d.width = kWidthFactor * d.spacing;
    d.caps.resize(m);
    std::vector<Vec3> centers = fibonacci_directions(m);
    for (int j = 0; j < m; ++j) {
        Cap& cap = d.caps[j];
        cap.center = centers[j];
        tangent_frame(cap.center, cap.t1, cap.t2);
        cap.angular_width = d.width;
        cap.radial_width = 1.0 / R;
    }

    // Centre separation feeds the discrete extension bound; spot-check it.
    double min2 = 4.0;
#pragma omp parallel for schedule(static) reduction(min : min2)
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) {
            double dx = centers[i][0] - centers[j][0];
            double dy = centers[i][1] - centers[j][1];
            double dz = centers[i][2] - centers[j][2];
            double s2 = dx * dx + dy * dy + dz * dz;
            if (s2 < min2) min2 = s2;
        }
    if (m > 1 && std::sqrt(min2) < 0.5 / std::sqrt(R))
        throw std::runtime_error("make_caps: centre separation below 0.5 R^{-1/2}");

    // Sampled invariants: full coverage of the sphere and bounded overlap.
    const int ms = 4 * m + 7;
    std::vector<Vec3> samples = fibonacci_directions(ms);
    int worst_active = 0;
    double worst_denom = 1e300;
#pragma omp parallel for schedule(static) reduction(max : worst_active) reduction(min : worst_denom)
    for (int j = 0; j < ms; ++j) {
        AngularScan s = scan_caps(d, samples[j]);
        if (s.denom < worst_denom) worst_denom = s.denom;
        if (s.active > worst_active) worst_active = s.active;
    }
    if (worst_denom < 1e-9)
        throw std::runtime_error("make_caps: coverage gap on the sphere");
    if (worst_active > 12)
        throw std::runtime_error("make_caps: overlap bound violated (> 12 caps active)");
    return d;
}

int shell_count(double R) {
    if (!(R >= 1.0)) throw std::invalid_argument("shell_count: R must be >= 1");
    int k = 0;
    while (std::ldexp(1.0, k + 1) / R <= 0.5) ++k;
    return k + 1;
}

Field shell_project(const Field& f, int k, double R) {
    if (!(R >= 1.0)) throw std::invalid_argument("shell_project: R must be >= 1");
    if (k < 0) throw std::invalid_argument("shell_project: k must be >= 0");
    if (k >= shell_count(R)) return Field(f.grid, f.domain);
    return apply_radial(f, R, [k](double t) { return shell_multiplier(t, k); });
}

Field shell_remainder(const Field& f, double R) {
    int K = shell_count(R) - 1;
    return apply_radial(f, R, [K](double t) {
        return 1.0 - smooth_profile(t * std::ldexp(1.0, -K));
    });
}

SquareFunctionResult square_function_check(const Field& f, double R) {
    if (!(R >= 1.0)) throw std::invalid_argument("square_function_check: R must be >= 1");
    const Grid3& g = f.grid;
    Field fh = to_domain(f, Domain::Frequency);
    Field fpos = to_domain(f, Domain::Position);

    // Pre-projection onto the shell.
    Field gh = fh;
#pragma omp parallel for schedule(static)
    for (int a = 0; a < g.n; ++a)
        for (int b = 0; b < g.n; ++b)
            for (int c = 0; c < g.n; ++c) {
                double xa = g.xi(a), xb = g.xi(b), xc = g.xi(c);
                double rho = std::sqrt(xa * xa + xb * xb + xc * xc);
                gh.at(a, b, c) *= radial_window(rho, R);
            }
    double shell_mass = lp_norm(gh, 2.0);
    if (shell_mass < 1e-10 * lp_norm(fh, 2.0) || shell_mass == 0.0)
        throw std::invalid_argument("square_function_check: no spectral mass on the shell");

    CapDecomposition d = make_caps(R);
    const int m = int(d.caps.size());

    // Split the shell modes over caps: per-mode normalised weights.
    struct Mode {
        int a, b, c;
        cplx val;
    };
    std::vector<Mode> modes;
    for (int a = 0; a < g.n; ++a)
        for (int b = 0; b < g.n; ++b)
            for (int c = 0; c < g.n; ++c) {
                cplx v = gh.at(a, b, c);
                if (std::abs(v) > 0.0) modes.push_back({a, b, c, v});
            }

    struct Incidence {
        int a, b, c;
        cplx coef;
    };
    std::vector<std::vector<std::pair<int, cplx>>> per_mode(modes.size());
#pragma omp parallel for schedule(static)
    for (std::size_t i = 0; i < modes.size(); ++i) {
        const Mode& md = modes[i];
        Vec3 xi{g.xi(md.a), g.xi(md.b), g.xi(md.c)};
        double rho = norm3(xi);
        if (rho < 1e-12) continue;
        Vec3 omega = scaled(xi, 1.0 / rho);
        double denom = 0.0;
        std::vector<std::pair<int, double>> raw;
        for (int al = 0; al < m; ++al) {
            double wv = raw_angular(d.caps[al], d.width, omega);
            if (wv > 0.0) {
                raw.push_back({al, wv});
                denom += wv;
            }
        }
        for (auto& [al, wv] : raw) {
            double wn = wv / denom;
            if (wn > 1e-3) per_mode[i].push_back({al, md.val * wn});
        }
    }
    std::vector<std::vector<Incidence>> inc(m);
    for (std::size_t i = 0; i < modes.size(); ++i)
        for (auto& [al, coef] : per_mode[i])
            inc[al].push_back({modes[i].a, modes[i].b, modes[i].c, coef});

    // Sampling stride for the cap square sum: the integrand (sum |g_a|^2)^2
    // is band-limited by four times the per-axis cap extent.
    double dax = 2.0 * d.width + d.width * d.width + 2.0 / R;
    int stride = 1;
    while (stride * 2 <= g.n / 16 && 2.0 * dax < kPi / (g.h * stride * 2)) stride *= 2;
    const int ns = g.n / stride;
    const double hs = g.h * stride;
    const double invL3 = 1.0 / (g.length * g.length * g.length);

    std::vector<double> xs(ns);
    for (int i = 0; i < ns; ++i) xs[i] = g.x(i * stride);

    std::vector<double> sq(std::size_t(ns) * ns * ns, 0.0);
#pragma omp parallel
    {
        std::vector<double> loc(sq.size(), 0.0);
        std::vector<cplx> ta, tb, tc, w, row;
#pragma omp for schedule(dynamic)
        for (int al = 0; al < m; ++al) {
            const auto& lst = inc[al];
            if (lst.empty()) continue;
            const int M = int(lst.size());
            ta.assign(std::size_t(M) * ns, {});
            tb.assign(std::size_t(M) * ns, {});
            tc.assign(std::size_t(M) * ns, {});
            for (int j = 0; j < M; ++j) {
                double pa = g.xi(lst[j].a), pb = g.xi(lst[j].b), pc = g.xi(lst[j].c);
                for (int i = 0; i < ns; ++i) {
                    ta[std::size_t(j) * ns + i] = std::polar(1.0, pa * xs[i]);
                    tb[std::size_t(j) * ns + i] = std::polar(1.0, pb * xs[i]);
                    tc[std::size_t(j) * ns + i] = std::polar(1.0, pc * xs[i]);
                }
            }
            w.assign(M, {});
            row.assign(ns, {});
            for (int ia = 0; ia < ns; ++ia) {
                for (int ib = 0; ib < ns; ++ib) {
                    for (int j = 0; j < M; ++j)
                        w[j] = lst[j].coef * ta[std::size_t(j) * ns + ia] *
                               tb[std::size_t(j) * ns + ib];
                    std::fill(row.begin(), row.end(), cplx(0.0, 0.0));
                    for (int j = 0; j < M; ++j) {
                        cplx wj = w[j];
                        const cplx* pcz = &tc[std::size_t(j) * ns];
                        for (int ic = 0; ic < ns; ++ic) row[ic] += wj * pcz[ic];
                    }
                    double* out = &loc[(std::size_t(ia) * ns + ib) * ns];
                    for (int ic = 0; ic < ns; ++ic) {
                        cplx v = row[ic] * invL3;
                        out[ic] += std::norm(v);
                    }
                }
            }
        }
#pragma omp critical
        for (std::size_t i = 0; i < sq.size(); ++i) sq[i] += loc[i];
    }

    double hs3 = hs * hs * hs;
    double s4 = 0.0, s43 = 0.0;
    for (double v : sq) {
        s4 += v * v;                      // S^4 with S = sqrt(v)
        s43 += std::pow(v, 2.0 / 3.0);    // S^(4/3)
    }

    SquareFunctionResult r;
    Field gpos = transform(gh, Domain::Position);
    double r18 = std::pow(R, 0.125);
    r.lhs_g2 = lp_norm(gpos, 4.0);
    r.rhs_g2 = r18 * std::pow(s4 * hs3, 0.25);
    r.lhs_f2 = std::pow(s43 * hs3, 0.75);
    r.rhs_f2 = r18 * lp_norm(fpos, 4.0 / 3.0);
    return r;
}

ExtensionCheck discrete_extension_check(double R, int trials, std::uint64_t seed) {
    if (!(R >= 4.0)) throw std::invalid_argument("discrete_extension_check: R must be >= 4");
    if (trials < 1) throw std::invalid_argument("discrete_extension_check: trials must be >= 1");
    CapDecomposition d = make_caps(R);
    const std::size_t m = d.caps.size();
    std::vector<Vec3> nodes(m);
    for (std::size_t j = 0; j < m; ++j) nodes[j] = d.caps[j].center;

    const double side = std::sqrt(R);
    // |E|^4 has per-axis bandwidth 4 (unit frequencies), so 8 samples per
    // shortest wavelength 2 pi / 4 puts the midpoint step at pi/16.
    const double step = kPi / 16.0;
    const double sqrtR = std::sqrt(R);

    ExtensionCheck out;
    std::vector<cplx> ones(m, cplx(1.0, 0.0));
    out.all_ones_ratio =
        expsum_l4_cube(nodes, ones, side, step) / (sqrtR * std::sqrt(double(m)));

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::bernoulli_distribution keep(0.5);
    for (int t = 0; t < trials; ++t) {
        std::vector<Vec3> pts;
        std::vector<cplx> coef;
        for (std::size_t j = 0; j < m; ++j) {
            bool in = keep(rng);
            double re = gauss(rng), im = gauss(rng);
            if (!in) continue;
            pts.push_back(nodes[j]);
            coef.push_back(cplx(re, im));
        }
        if (pts.empty()) {
            pts.push_back(nodes[0]);
            coef.push_back(cplx(1.0, 0.0));
        }
        double l2 = 0.0;
        for (cplx c : coef) l2 += std::norm(c);
        l2 = std::sqrt(l2);
        double ratio = expsum_l4_cube(pts, coef, side, step) / (sqrtR * l2);
        if (ratio > out.max_ratio) out.max_ratio = ratio;
    }
    return out;
}

Field knapp_field(double R, const Vec3& direction, const Grid3& grid) {
    if (!(R >= 1.0)) throw std::invalid_argument("knapp_field: R must be >= 1");
    if (4.0 * R > grid.length + 1e-12)
        throw std::invalid_argument("knapp_field: tube exceeds box (need R <= L/4)");
    double nd = norm3(direction);
    if (nd < 1e-12) throw std::invalid_argument("knapp_field: zero direction");
    if (grid.freq_step * (grid.n / 2) < 1.0 + 2.0 / R)
        throw std::invalid_argument("knapp_field: grid band edge below the unit shell");
    Vec3 dir = scaled(direction, 1.0 / nd);
    Vec3 t1, t2;
    tangent_frame(dir, t1, t2);

    const double aw = 1.0 / std::sqrt(R);
    Field fh(grid, Domain::Frequency);
#pragma omp parallel for schedule(static)
    for (int a = 0; a < grid.n; ++a)
        for (int b = 0; b < grid.n; ++b)
            for (int c = 0; c < grid.n; ++c) {
                Vec3 xi{grid.xi(a), grid.xi(b), grid.xi(c)};
                double rho = norm3(xi);
                if (rho < 1e-12) continue;
                double rad = radial_window(rho, R);
                if (rad == 0.0) continue;
                Vec3 omega = scaled(xi, 1.0 / rho);
                if (dot3(omega, dir) <= 0.0) continue;
                double u1 = dot3(omega, t1), u2 = dot3(omega, t2);
                fh.at(a, b, c) =
                    rad * smooth_profile(u1 / aw) * smooth_profile(u2 / aw);
            }

    Field f = transform(fh, Domain::Position);
    double n2 = lp_norm(f, 2.0);
    if (n2 == 0.0) throw std::runtime_error("knapp_field: cap contains no lattice modes");
    // Tube of volume R^2 makes ||f||_2 / ||f||_{4/3} ~ c R^{-1/2}; the
    // nominal c below was measured on h = 2 grids over R in {8..64}.
    double c = n2 / lp_norm(f, 4.0 / 3.0) * std::sqrt(R);
    const double c0 = 0.21;  // measured over R in {8..64}, L/R in {4..32}
    if (c < 0.5 * c0 || c > 2.0 * c0)
        throw std::runtime_error("knapp_field: tube norm relation violated");
    return f;
}

double localized_resolvent_norm(const Field& f, double R, double eps) {
    double L = f.grid.length;
    if (!(R > 0) || R > 0.25 * L + 1e-12)
        throw std::invalid_argument("localized_resolvent_norm: need 0 < R <= L/4");
    if (eps < 4.0 / L - 1e-12)
        throw std::invalid_argument("localized_resolvent_norm: eps below 4/L");
    Field u = apply_free_resolvent(f, spectral_param(1.0, eps, +1));
    return ball_l2(to_domain(u, Domain::Position), R);
}

double local_extension_norm_check(double R, int trials) {
    if (!(R >= 2.0)) throw std::invalid_argument("local_extension_norm_check: R must be >= 2");
    if (trials < 1) throw std::invalid_argument("local_extension_norm_check: trials must be >= 1");
    int n = 8;
    while (n < 2.0 * R - 1e-9) n *= 2;
    Grid3 grid = make_grid(n, 4.0 * R);
    SphereQuadrature quad = sphere_quadrature(768);

    std::mt19937_64 rng(0x51B07ull + std::uint64_t(std::llround(R * 65536.0)));
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    double best = 0.0;
    for (int t = 0; t < trials; ++t) {
        Field f(grid, Domain::Position);
        int nb = 1 + t % 3;
        for (int b = 0; b < nb; ++b) {
            double ctr[3], mod[3];
            for (int i = 0; i < 3; ++i) ctr[i] = (uni(rng) - 0.5) * grid.length / 4.0;
            // unit-length modulation puts the bump spectrum on the sphere
            double mx = gauss(rng), my = gauss(rng), mz = gauss(rng);
            double mn = std::sqrt(mx * mx + my * my + mz * mz);
            if (mn < 1e-9) mn = 1.0;
            mod[0] = mx / mn;
            mod[1] = my / mn;
            mod[2] = mz / mn;
            double width = 1.5 + 1.5 * uni(rng);
            cplx amp(gauss(rng), gauss(rng));
            Field bump = gaussian_bump(grid, ctr, width, mod, amp);
            for (std::size_t i = 0; i < f.values.size(); ++i) f.values[i] += bump.values[i];
        }
        Field u = extend(restrict(f, 1.0, quad), grid);
        double ratio = ball_l2(u, R) / (std::sqrt(R) * lp_norm(f, 4.0 / 3.0));
        if (ratio > best) best = ratio;
    }
    return best;
}

double local_bilinear_norm(double R, const Vec3& v, double eps, const Grid3& grid) {
    double L = grid.length;
    if (!(R > 0) || R > 0.25 * L + 1e-12)
        throw std::invalid_argument("local_bilinear_norm: need 0 < R <= L/4");
    for (int i = 0; i < 3; ++i)
        if (std::abs(v[i]) > 0.5 * L + 1e-12)
            throw std::invalid_argument("local_bilinear_norm: balls leave the box");
    if (eps < 4.0 / L - 1e-12)
        throw std::invalid_argument("local_bilinear_norm: eps below 4/L");

    Vec3 origin{0, 0, 0};
    SpectralParam zp = spectral_param(1.0, eps, +1);
    SpectralParam zm = spectral_param(1.0, eps, -1);
    LinearOperator op;
    op.apply = [&](const Field& f) {
        Field a = sharp_ball_mask(f, v, R);
        Field b = apply_free_resolvent(a, zp);
        return sharp_ball_mask(b, origin, R);
    };
    op.apply_adjoint = [&](const Field& f) {
        Field a = sharp_ball_mask(f, origin, R);
        Field b = apply_free_resolvent(a, zm);
        return sharp_ball_mask(b, v, R);
    };
    OpNormEstimate est = estimate_opnorm(op, grid, 2.0, 2.0, 48, 2, 0x20240817ull);
    return est.lower_bound;
}

}  // namespace rlab
