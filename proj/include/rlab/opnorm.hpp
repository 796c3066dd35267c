#pragma once

#include <functional>

#include "rlab/grid.hpp"

namespace rlab {

/// Operator handed to the norm estimator: forward map and its adjoint with
/// respect to the h^3 Hermitian pairing. Both take and return position-domain
/// fields on a fixed grid.
struct LinearOperator {
    std::function<Field(const Field&)> apply;
    std::function<Field(const Field&)> apply_adjoint;
};

struct OpNormEstimate {
    double p = 0, q = 0;
    double lower_bound = 0;  // best ||Tf||_q with ||f||_p = 1 seen so far
    Field witness;           // the f achieving it
    int iterations = 0;      // total iterations spent
};

/// Lower-bounds ||T||_{p->q} by nonlinear power iteration with duality maps:
///   g = T f;  h = |g|^{q-1} phase(g) normalised in L^{q'};
///   f <- |T* h|^{p'-1} phase(T* h) normalised in L^p.
/// phase(0) = 0. lower_bound is the running max, hence monotone per trial;
/// the max over `trials` random restarts (seeded from `seed`) is returned.
/// `start` optionally seeds the first trial.
OpNormEstimate estimate_opnorm(const LinearOperator& op, const Grid3& grid,
                               double p, double q, int iters, int trials,
                               std::uint64_t seed, const Field* start = nullptr);

}  // namespace rlab
