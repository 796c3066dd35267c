#pragma once

#include "rlab/grid.hpp"

namespace rlab {

/// Semi-discrete Fourier transform between the two domains.
///
/// Forward:  f_hat(xi) = h^3 * sum_x f(x) e^{-i xi.x}
/// Inverse:  f(x) = L^-3 * sum_xi f_hat(xi) e^{+i xi.x}
/// The pair is an exact round trip on the grid. Frequencies are stored in
/// FFT order (see Grid3::freq_index); the (-1)^{kx+ky+kz} twiddles that
/// account for the box being centred at the origin are applied internally.
Field transform(const Field& f, Domain target);

namespace serial {
/// Naive separable O(n^4) reference of the same convention, for tests.
Field transform(const Field& f, Domain target);
}  // namespace serial

/// Same trigonometric polynomial sampled on a finer grid of n_out >= n
/// points per axis (box length unchanged): frequency coefficients are
/// zero-padded, with Nyquist rows split evenly across +-n/2 so real fields
/// stay real. Output is in the domain of the input.
Field trig_upsample(const Field& f, int n_out);

}  // namespace rlab
