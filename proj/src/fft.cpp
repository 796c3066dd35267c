#include "rlab/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

#include "rlab/parallel.hpp"

namespace rlab {

namespace {

struct PlanPair {
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
};

// One plan pair per grid size. Plans are created with FFTW_UNALIGNED so they
// can be re-executed on any buffer of the same shape via fftw_execute_dft.
PlanPair& plans_for(int n) {
    static std::mutex mu;
    static std::map<int, PlanPair> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    init_threads();  // fftw thread setup must precede planning
    std::vector<cplx> scratch(std::size_t(n) * n * n);
    auto* p = reinterpret_cast<fftw_complex*>(scratch.data());
    PlanPair pp;
    unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    pp.fwd = fftw_plan_dft_3d(n, n, n, p, p, FFTW_FORWARD, flags);
    pp.bwd = fftw_plan_dft_3d(n, n, n, p, p, FFTW_BACKWARD, flags);
    return cache.emplace(n, pp).first->second;
}

}  // namespace

Field transform(const Field& f, Domain target) {
    if (f.domain == target) return f;
    const Grid3& g = f.grid;
    Field out(g, target);
    out.values = f.values;
    auto* buf = reinterpret_cast<fftw_complex*>(out.values.data());
    PlanPair& pp = plans_for(g.n);

    const int n = g.n;
    if (target == Domain::Frequency) {
        // f_hat_k = h^3 (-1)^{kx+ky+kz} FFT(f)_k
        fftw_execute_dft(pp.fwd, buf, buf);
        const double h3 = g.h * g.h * g.h;
#pragma omp parallel for schedule(static)
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int c = 0; c < n; ++c) {
                    double s = ((a + b + c) & 1) ? -h3 : h3;
                    out.values[g.idx(a, b, c)] *= s;
                }
    } else {
        // f_j = L^-3 BFFT((-1)^{kx+ky+kz} f_hat)_j
        const double invL3 = 1.0 / (g.length * g.length * g.length);
#pragma omp parallel for schedule(static)
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int c = 0; c < n; ++c) {
                    double s = ((a + b + c) & 1) ? -invL3 : invL3;
                    out.values[g.idx(a, b, c)] *= s;
                }
        fftw_execute_dft(pp.bwd, buf, buf);
    }
    return out;
}

namespace serial {

Field transform(const Field& f, Domain target) {
    if (f.domain == target) return f;
    const Grid3& g = f.grid;
    const int n = g.n;
    const bool fwd = target == Domain::Frequency;

    // Apply the 1-d transform along one axis at a time.
    auto axis_pass = [&](std::vector<cplx>& v, int axis) {
        std::vector<cplx> w(g.size());
        std::vector<cplx> tw(std::size_t(n) * n);
        for (int k = 0; k < n; ++k)      // output index
            for (int j = 0; j < n; ++j)  // summed input index
                tw[std::size_t(k) * n + j] =
                    std::polar(1.0, fwd ? -g.xi(k) * g.x(j) : g.xi(j) * g.x(k));
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int k = 0; k < n; ++k) {
                    cplx acc(0.0, 0.0);
                    for (int j = 0; j < n; ++j) {
                        std::size_t id = axis == 0   ? g.idx(j, a, b)
                                         : axis == 1 ? g.idx(a, j, b)
                                                     : g.idx(a, b, j);
                        acc += v[id] * tw[std::size_t(k) * n + j];
                    }
                    std::size_t od = axis == 0   ? g.idx(k, a, b)
                                     : axis == 1 ? g.idx(a, k, b)
                                                 : g.idx(a, b, k);
                    w[od] = acc;
                }
        v.swap(w);
    };

    Field out(g, target);
    out.values = f.values;
    for (int axis = 0; axis < 3; ++axis) axis_pass(out.values, axis);
    double scale = fwd ? g.h * g.h * g.h : 1.0 / (g.length * g.length * g.length);
    for (auto& z : out.values) z *= scale;
    return out;
}

}  // namespace serial

Field trig_upsample(const Field& f, int n_out) {
    const Grid3& g = f.grid;
    if (n_out < g.n) throw std::invalid_argument("trig_upsample: n_out must be >= n");
    Field fh = transform(f, Domain::Frequency);
    Grid3 g2 = make_grid(n_out, g.length);
    Field oh(g2, Domain::Frequency);
    const int n = g.n, half = n / 2;
    auto place = [&](int k, int& o0, int& o1, double& w) {
        // input index k holds frequency freq_index(k); the -n/2 row stands
        // for both +-n/2 on the coarse grid, so split it when n_out > n
        int kf = g.freq_index(k);
        if (n_out > n && n % 2 == 0 && kf == -half) {
            o0 = (n_out - half) % n_out;
            o1 = half;
            w = 0.5;
        } else {
            o0 = o1 = (kf + n_out) % n_out;
            w = 1.0;
        }
    };
    for (int a = 0; a < n; ++a) {
        int a0, a1;
        double wa;
        place(a, a0, a1, wa);
        for (int b = 0; b < n; ++b) {
            int b0, b1;
            double wb;
            place(b, b0, b1, wb);
            for (int c = 0; c < n; ++c) {
                int c0, c1;
                double wc;
                place(c, c0, c1, wc);
                cplx v = fh.at(a, b, c);
                for (int ia = 0; ia < (a0 == a1 ? 1 : 2); ++ia)
                    for (int ib = 0; ib < (b0 == b1 ? 1 : 2); ++ib)
                        for (int ic = 0; ic < (c0 == c1 ? 1 : 2); ++ic)
                            oh.at(ia ? a1 : a0, ib ? b1 : b0, ic ? c1 : c0) +=
                                v * wa * wb * wc;
            }
        }
    }
    return f.domain == Domain::Frequency ? oh : transform(oh, Domain::Position);
}

}  // namespace rlab
