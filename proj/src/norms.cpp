#include "rlab/norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rlab {

namespace {
constexpr int kBlocks = 1024;

// Block-then-ordered-combine: bitwise reproducible for any thread count.
template <class PerEntry>
double block_sum(std::size_t count, PerEntry&& term) {
    std::vector<double> partial(kBlocks, 0.0);
    const std::size_t chunk = (count + kBlocks - 1) / kBlocks;
#pragma omp parallel for schedule(static)
    for (int b = 0; b < kBlocks; ++b) {
        std::size_t lo = std::size_t(b) * chunk;
        std::size_t hi = std::min(count, lo + chunk);
        double acc = 0.0;
        for (std::size_t i = lo; i < hi; ++i) acc += term(i);
        partial[b] = acc;
    }
    double total = 0.0;
    for (double v : partial) total += v;
    return total;
}
}  // namespace

double ordered_sum(const std::vector<double>& partial) {
    double total = 0.0;
    for (double v : partial) total += v;
    return total;
}

double lp_norm(const Field& f, double p) {
    if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
    const auto& v = f.values;
    if (std::isinf(p)) {
        std::vector<double> partial(kBlocks, 0.0);
        const std::size_t chunk = (v.size() + kBlocks - 1) / kBlocks;
#pragma omp parallel for schedule(static)
        for (int b = 0; b < kBlocks; ++b) {
            std::size_t lo = std::size_t(b) * chunk;
            std::size_t hi = std::min(v.size(), lo + chunk);
            double m = 0.0;
            for (std::size_t i = lo; i < hi; ++i) m = std::max(m, std::abs(v[i]));
            partial[b] = m;
        }
        return *std::max_element(partial.begin(), partial.end());
    }
    const double step = f.domain == Domain::Position ? f.grid.h : f.grid.freq_step;
    const double h3 = step * step * step;
    double s;
    if (p == 2.0) {
        s = block_sum(v.size(), [&](std::size_t i) { return std::norm(v[i]); });
    } else if (p == 1.0) {
        s = block_sum(v.size(), [&](std::size_t i) { return std::abs(v[i]); });
    } else if (p == 4.0) {
        s = block_sum(v.size(), [&](std::size_t i) {
            double q = std::norm(v[i]);
            return q * q;
        });
    } else {
        s = block_sum(v.size(), [&](std::size_t i) { return std::pow(std::abs(v[i]), p); });
    }
    return std::pow(s * h3, 1.0 / p);
}

double weighted_l2_norm(const Field& f, double delta) {
    if (f.domain != Domain::Position)
        throw std::invalid_argument("weighted_l2_norm: field must be in the position domain");
    const Grid3& g = f.grid;
    const double h3 = g.h * g.h * g.h;
    const int n = g.n;
    const double expo = delta - 0.5;
    std::vector<double> partial(n, 0.0);
#pragma omp parallel for schedule(static)
    for (int a = 0; a < n; ++a) {
        double xa = g.x(a), acc = 0.0;
        for (int b = 0; b < n; ++b) {
            double xb = g.x(b);
            for (int c = 0; c < n; ++c) {
                double xc = g.x(c);
                double r = std::sqrt(xa * xa + xb * xb + xc * xc);
                double w = std::pow(1.0 + r, expo);
                acc += w * w * std::norm(f.values[g.idx(a, b, c)]);
            }
        }
        partial[a] = acc;
    }
    return std::sqrt(ordered_sum(partial) * h3);
}

double l1_fraction_outside_middle_half(const Field& f) {
    if (f.domain != Domain::Position)
        throw std::invalid_argument("l1_fraction_outside_middle_half: need a position field");
    const Grid3& g = f.grid;
    const double quarter = 0.25 * g.length + 1e-12;
    double inside = 0.0, outside = 0.0;
    for (int a = 0; a < g.n; ++a)
        for (int b = 0; b < g.n; ++b)
            for (int c = 0; c < g.n; ++c) {
                double m = std::max({std::abs(g.x(a)), std::abs(g.x(b)), std::abs(g.x(c))});
                (m <= quarter ? inside : outside) += std::abs(f.at(a, b, c));
            }
    double total = inside + outside;
    return total > 0.0 ? outside / total : 0.0;
}

cplx inner(const Field& f, const Field& g) {
    require_same_grid(f, g, "inner");
    if (f.domain != g.domain) throw std::invalid_argument("inner: domain mismatch");
    const double step = f.domain == Domain::Position ? f.grid.h : f.grid.freq_step;
    const double h3 = step * step * step;
    double re = 0.0, im = 0.0;
    const auto& a = f.values;
    const auto& b = g.values;
    std::vector<double> pre(kBlocks, 0.0), pim(kBlocks, 0.0);
    const std::size_t chunk = (a.size() + kBlocks - 1) / kBlocks;
#pragma omp parallel for schedule(static)
    for (int blk = 0; blk < kBlocks; ++blk) {
        std::size_t lo = std::size_t(blk) * chunk;
        std::size_t hi = std::min(a.size(), lo + chunk);
        cplx acc(0.0, 0.0);
        for (std::size_t i = lo; i < hi; ++i) acc += a[i] * std::conj(b[i]);
        pre[blk] = acc.real();
        pim[blk] = acc.imag();
    }
    re = ordered_sum(pre);
    im = ordered_sum(pim);
    return cplx(re * h3, im * h3);
}

}  // namespace rlab
