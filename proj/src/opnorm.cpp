#include "rlab/opnorm.hpp"

#include <cmath>

#include "rlab/norms.hpp"
#include "rlab/random_fields.hpp"

namespace rlab {

namespace {

double conj_exp(double p) { return p / (p - 1.0); }

// Duality map into L^r: |w|^{r'-1} phase(w), then normalised in L^r.
// phase(0) = 0.
Field duality_map(const Field& w, double r) {
    const double rp = conj_exp(r);
    Field out = w;
#pragma omp parallel for schedule(static)
    for (long i = 0; i < long(out.values.size()); ++i) {
        cplx z = out.values[i];
        double a = std::abs(z);
        out.values[i] = a > 0 ? std::pow(a, rp - 1.0) * (z / a) : cplx(0.0, 0.0);
    }
    double nn = lp_norm(out, r);
    if (nn > 0)
        for (auto& z : out.values) z /= nn;
    return out;
}

}  // namespace

OpNormEstimate estimate_opnorm(const LinearOperator& op, const Grid3& grid,
                               double p, double q, int iters, int trials,
                               std::uint64_t seed, const Field* start) {
    if (!(p > 1.0) || !(q > 1.0))
        throw std::invalid_argument("estimate_opnorm: need 1 < p,q < infinity for duality maps");
    if (iters < 1 || trials < 1) throw std::invalid_argument("estimate_opnorm: iters/trials >= 1");

    OpNormEstimate best;
    best.p = p;
    best.q = q;

    for (int t = 0; t < trials; ++t) {
        Field f = (t == 0 && start) ? *start : band_limited_field(grid, seed + 977 * t);
        double np = lp_norm(f, p);
        if (np == 0) continue;
        for (auto& z : f.values) z /= np;

        double trial_best = 0.0;
        Field trial_witness = f;
        for (int it = 0; it < iters; ++it) {
            Field g = op.apply(f);
            double ratio = lp_norm(g, q);
            if (ratio > trial_best) {
                trial_best = ratio;
                trial_witness = f;
            }
            Field hdual = duality_map(g, conj_exp(q));   // in L^{q'}
            Field w = op.apply_adjoint(hdual);
            Field fn = duality_map(w, p);                // back in L^p
            if (lp_norm(fn, p) == 0) break;              // operator annihilated the iterate
            f = fn;
            best.iterations++;
        }
        if (trial_best > best.lower_bound) {
            best.lower_bound = trial_best;
            best.witness = trial_witness;
        }
    }
    return best;
}

}  // namespace rlab
