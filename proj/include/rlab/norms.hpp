#pragma once

#include "rlab/grid.hpp"

namespace rlab {

/// Riemann-sum L^p norm (sum |f|^p vol)^(1/p); p = infinity gives the max.
/// The cell volume is h^3 for position fields and freq_step^3 for frequency
/// fields, so Plancherel reads ||f||_2 = (2 pi)^(-3/2) ||transform(f)||_2.
/// Requires p >= 1.
double lp_norm(const Field& f, double p);

/// ||(1+|x|)^(delta-1/2) f||_2 over the position lattice.
double weighted_l2_norm(const Field& f, double delta);

/// Hermitian pairing h^3 sum f conj(g).
cplx inner(const Field& f, const Field& g);

/// Fraction of the L1 mass of a position field lying outside the middle half
/// of the box (some coordinate beyond L/4). Zero field gives 0. Gate used by
/// the continuum-vs-lattice checks that need wraparound-free supports.
double l1_fraction_outside_middle_half(const Field& f);

/// Deterministic (thread-count independent order) sum helper used by the
/// norm kernels; exposed for reuse.
double ordered_sum(const std::vector<double>& partial);

}  // namespace rlab
