#include "rlab/kernels.hpp"

#include <cmath>

namespace rlab {

namespace {

void check_position(const Field& f, const char* what) {
    if (f.domain != Domain::Position)
        throw std::invalid_argument(std::string(what) + ": field must be in the position domain");
}

// Per-axis phase table e^{s i p x_j}, j = 0..n-1.
std::vector<cplx> phase_axis(const Grid3& g, double p, double sgn) {
    std::vector<cplx> t(g.n);
    for (int j = 0; j < g.n; ++j) t[j] = std::polar(1.0, sgn * p * g.x(j));
    return t;
}

}  // namespace

std::vector<cplx> nudft_forward(const Field& f, const std::vector<Vec3>& points) {
    check_position(f, "nudft_forward");
    const Grid3& g = f.grid;
    const int n = g.n;
    const double h3 = g.h * g.h * g.h;
    std::vector<cplx> out(points.size());
#pragma omp parallel for schedule(dynamic)
    for (long j = 0; j < long(points.size()); ++j) {
        auto ta = phase_axis(g, points[j][0], -1.0);
        auto tb = phase_axis(g, points[j][1], -1.0);
        auto tc = phase_axis(g, points[j][2], -1.0);
        // contract axis by axis: z first, then y, then x
        cplx acc(0.0, 0.0);
        for (int a = 0; a < n; ++a) {
            cplx accb(0.0, 0.0);
            for (int b = 0; b < n; ++b) {
                const cplx* row = &f.values[g.idx(a, b, 0)];
                cplx accc(0.0, 0.0);
                for (int c = 0; c < n; ++c) accc += row[c] * tc[c];
                accb += accc * tb[b];
            }
            acc += accb * ta[a];
        }
        out[j] = acc * h3;
    }
    return out;
}

Field nudft_adjoint(const Grid3& g, const std::vector<Vec3>& points,
                    const std::vector<double>& weights, const std::vector<cplx>& s) {
    if (points.size() != weights.size() || points.size() != s.size())
        throw std::invalid_argument("nudft_adjoint: size mismatch");
    const int n = g.n;
    Field u(g, Domain::Position);
#pragma omp parallel for schedule(static)
    for (int a = 0; a < n; ++a) {
        std::vector<cplx> plane(std::size_t(n) * n, cplx(0, 0));
        for (std::size_t j = 0; j < points.size(); ++j) {
            cplx wa = weights[j] * s[j] * std::polar(1.0, points[j][0] * g.x(a));
            if (wa == cplx(0.0, 0.0)) continue;
            // rank-1 update over the (b,c) plane
            std::vector<cplx> tb(n), tc(n);
            for (int b = 0; b < n; ++b) tb[b] = std::polar(1.0, points[j][1] * g.x(b));
            for (int c = 0; c < n; ++c) tc[c] = std::polar(1.0, points[j][2] * g.x(c));
            for (int b = 0; b < n; ++b) {
                cplx wab = wa * tb[b];
                cplx* row = &plane[std::size_t(b) * n];
                for (int c = 0; c < n; ++c) row[c] += wab * tc[c];
            }
        }
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c) u.at(a, b, c) = plane[std::size_t(b) * n + c];
    }
    return u;
}

Field radial_convolution(const Field& f, const std::function<cplx(double)>& kernel,
                         cplx self_coeff) {
    check_position(f, "radial_convolution");
    const Grid3& g = f.grid;
    const int n = g.n;
    const int m = 2 * n - 1;
    const double h3 = g.h * g.h * g.h;

    // offset table K(|d|*h), d in [-(n-1), n-1]^3; zero offset holds the
    // self coefficient divided by h^3 so one pass covers everything
    std::vector<cplx> tab(std::size_t(m) * m * m);
#pragma omp parallel for schedule(static)
    for (int da = -(n - 1); da <= n - 1; ++da)
        for (int db = -(n - 1); db <= n - 1; ++db)
            for (int dc = -(n - 1); dc <= n - 1; ++dc) {
                std::size_t id = (std::size_t(da + n - 1) * m + (db + n - 1)) * m + (dc + n - 1);
                if (da == 0 && db == 0 && dc == 0) {
                    tab[id] = self_coeff / h3;
                } else {
                    double r = g.h * std::sqrt(double(da) * da + double(db) * db + double(dc) * dc);
                    tab[id] = kernel(r);
                }
            }

    Field u(g, Domain::Position);
#pragma omp parallel for schedule(dynamic)
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c) {
                cplx acc(0.0, 0.0);
                for (int ya = 0; ya < n; ++ya) {
                    std::size_t ta = std::size_t(a - ya + n - 1) * m;
                    for (int yb = 0; yb < n; ++yb) {
                        std::size_t tb = (ta + (b - yb + n - 1)) * m + (c + n - 1);
                        const cplx* frow = &f.values[g.idx(ya, yb, 0)];
                        const cplx* krow = &tab[tb];
                        // krow indexed by (c - yc): walk yc forward, offset backward
                        for (int yc = 0; yc < n; ++yc) acc += frow[yc] * krow[-yc];
                    }
                }
                u.at(a, b, c) = acc * h3;
            }
    return u;
}

double expsum_l4_cube(const std::vector<Vec3>& points, const std::vector<cplx>& coef,
                      double side, double step) {
    if (points.size() != coef.size()) throw std::invalid_argument("expsum_l4_cube: size mismatch");
    if (!(side > 0) || !(step > 0)) throw std::invalid_argument("expsum_l4_cube: bad geometry");
    const int N = std::max(2, int(std::ceil(side / step)));
    const double dx = side / N;
    const double vol = dx * dx * dx;
    const std::size_t total = std::size_t(N) * N * N;

    // midpoint nodes
    std::vector<double> xs(N);
    for (int i = 0; i < N; ++i) xs[i] = -0.5 * side + (i + 0.5) * dx;

    // per-node phase tables
    const std::size_t J = points.size();
    std::vector<cplx> pa(J * N), pb(J * N), pc(J * N);
    for (std::size_t j = 0; j < J; ++j)
        for (int i = 0; i < N; ++i) {
            pa[j * N + i] = std::polar(1.0, points[j][0] * xs[i]);
            pb[j * N + i] = std::polar(1.0, points[j][1] * xs[i]);
            pc[j * N + i] = std::polar(1.0, points[j][2] * xs[i]);
        }

    std::vector<double> partial(N, 0.0);
#pragma omp parallel
    {
        std::vector<cplx> row(N);
#pragma omp for schedule(static)
        for (int a = 0; a < N; ++a) {
            double acc = 0.0;
            for (int b = 0; b < N; ++b) {
                std::fill(row.begin(), row.end(), cplx(0.0, 0.0));
                for (std::size_t j = 0; j < J; ++j) {
                    cplx w = coef[j] * pa[j * N + a] * pb[j * N + b];
                    const cplx* pcz = &pc[j * N];
                    for (int c = 0; c < N; ++c) row[c] += w * pcz[c];
                }
                for (int c = 0; c < N; ++c) {
                    double q = std::norm(row[c]);
                    acc += q * q;
                }
            }
            partial[a] = acc;
        }
    }
    double sum = 0.0;
    for (double v : partial) sum += v;
    (void)total;
    return std::pow(sum * vol, 0.25);
}

void apply_symbol(Field& fh, const std::function<cplx(const Vec3&)>& symbol) {
    if (fh.domain != Domain::Frequency)
        throw std::invalid_argument("apply_symbol: field must be in the frequency domain");
    const Grid3& g = fh.grid;
#pragma omp parallel for schedule(static)
    for (int a = 0; a < g.n; ++a) {
        Vec3 xi;
        xi[0] = g.xi(a);
        for (int b = 0; b < g.n; ++b) {
            xi[1] = g.xi(b);
            for (int c = 0; c < g.n; ++c) {
                xi[2] = g.xi(c);
                fh.at(a, b, c) *= symbol(xi);
            }
        }
    }
}

namespace serial {

std::vector<cplx> nudft_forward(const Field& f, const std::vector<Vec3>& points) {
    check_position(f, "nudft_forward");
    const Grid3& g = f.grid;
    const double h3 = g.h * g.h * g.h;
    std::vector<cplx> out(points.size());
    for (std::size_t j = 0; j < points.size(); ++j) {
        cplx acc(0.0, 0.0);
        for (int a = 0; a < g.n; ++a)
            for (int b = 0; b < g.n; ++b)
                for (int c = 0; c < g.n; ++c) {
                    double ph = points[j][0] * g.x(a) + points[j][1] * g.x(b) + points[j][2] * g.x(c);
                    acc += f.at(a, b, c) * std::polar(1.0, -ph);
                }
        out[j] = acc * h3;
    }
    return out;
}

Field nudft_adjoint(const Grid3& g, const std::vector<Vec3>& points,
                    const std::vector<double>& weights, const std::vector<cplx>& s) {
    if (points.size() != weights.size() || points.size() != s.size())
        throw std::invalid_argument("nudft_adjoint: size mismatch");
    Field u(g, Domain::Position);
    for (int a = 0; a < g.n; ++a)
        for (int b = 0; b < g.n; ++b)
            for (int c = 0; c < g.n; ++c) {
                cplx acc(0.0, 0.0);
                for (std::size_t j = 0; j < points.size(); ++j) {
                    double ph = points[j][0] * g.x(a) + points[j][1] * g.x(b) + points[j][2] * g.x(c);
                    acc += weights[j] * s[j] * std::polar(1.0, ph);
                }
                u.at(a, b, c) = acc;
            }
    return u;
}

Field radial_convolution(const Field& f, const std::function<cplx(double)>& kernel,
                         cplx self_coeff) {
    check_position(f, "radial_convolution");
    const Grid3& g = f.grid;
    const int n = g.n;
    const double h3 = g.h * g.h * g.h;
    Field u(g, Domain::Position);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c) {
                cplx acc = self_coeff * f.at(a, b, c);
                for (int ya = 0; ya < n; ++ya)
                    for (int yb = 0; yb < n; ++yb)
                        for (int yc = 0; yc < n; ++yc) {
                            if (ya == a && yb == b && yc == c) continue;
                            double dx = g.h * (a - ya), dy = g.h * (b - yb), dz = g.h * (c - yc);
                            double r = std::sqrt(dx * dx + dy * dy + dz * dz);
                            acc += h3 * kernel(r) * f.at(ya, yb, yc);
                        }
                u.at(a, b, c) = acc;
            }
    return u;
}

double expsum_l4_cube(const std::vector<Vec3>& points, const std::vector<cplx>& coef,
                      double side, double step) {
    if (points.size() != coef.size()) throw std::invalid_argument("expsum_l4_cube: size mismatch");
    const int N = std::max(2, int(std::ceil(side / step)));
    const double dx = side / N;
    double sum = 0.0;
    for (int a = 0; a < N; ++a)
        for (int b = 0; b < N; ++b)
            for (int c = 0; c < N; ++c) {
                double x = -0.5 * side + (a + 0.5) * dx;
                double y = -0.5 * side + (b + 0.5) * dx;
                double z = -0.5 * side + (c + 0.5) * dx;
                cplx e(0.0, 0.0);
                for (std::size_t j = 0; j < points.size(); ++j)
                    e += coef[j] * std::polar(1.0, points[j][0] * x + points[j][1] * y + points[j][2] * z);
                double q = std::norm(e);
                sum += q * q;
            }
    return std::pow(sum * dx * dx * dx, 0.25);
}

}  // namespace serial

}  // namespace rlab
