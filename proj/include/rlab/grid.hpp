#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace rlab {

using cplx = std::complex<double>;

/// Periodic cubic grid. Positions live on {-L/2 + j*h : j = 0..n-1}^3,
/// frequencies on freq_step * {-n/2..n/2-1}^3 with freq_step = 2*pi/L.
struct Grid3 {
    int n = 0;          // points per axis, power of two, >= 8
    double length = 0;  // box edge L
    double h = 0;       // L / n
    double freq_step = 0;

    std::size_t size() const { return std::size_t(n) * n * n; }

    /// Position coordinate along one axis for storage index j.
    double x(int j) const { return -0.5 * length + h * j; }

    /// Signed frequency index: storage k -> k for k < n/2, k - n otherwise.
    int freq_index(int k) const { return k < n / 2 ? k : k - n; }

    /// Frequency coordinate along one axis for storage index k.
    double xi(int k) const { return freq_step * freq_index(k); }

    std::size_t idx(int a, int b, int c) const {
        return (std::size_t(a) * n + b) * n + c;
    }
};

inline bool is_pow2(int v) { return v > 0 && (v & (v - 1)) == 0; }

inline Grid3 make_grid(int n, double length) {
    if (!is_pow2(n) || n < 8) throw std::invalid_argument("make_grid: n must be a power of two >= 8");
    if (!(length > 0)) throw std::invalid_argument("make_grid: box length must be positive");
    Grid3 g;
    g.n = n;
    g.length = length;
    g.h = length / n;
    g.freq_step = 2.0 * 3.141592653589793238462643383279502884 / length;
    return g;
}

enum class Domain : std::uint8_t { Position, Frequency };

/// Complex scalar field on a Grid3, tagged with the domain its samples live in.
struct Field {
    Grid3 grid;
    Domain domain = Domain::Position;
    std::vector<cplx> values;

    Field() = default;
    Field(const Grid3& g, Domain d) : grid(g), domain(d), values(g.size(), cplx(0.0, 0.0)) {}

    cplx& at(int a, int b, int c) { return values[grid.idx(a, b, c)]; }
    const cplx& at(int a, int b, int c) const { return values[grid.idx(a, b, c)]; }
};

inline void require_same_grid(const Field& a, const Field& b, const char* what) {
    if (a.grid.n != b.grid.n || a.grid.length != b.grid.length)
        throw std::invalid_argument(std::string(what) + ": fields live on different grids");
}

constexpr double kPi = 3.141592653589793238462643383279502884;

}  // namespace rlab
