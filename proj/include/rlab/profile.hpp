#pragma once

#include <cmath>

namespace rlab {

/// Fixed C-infinity plateau profile: 1 on [-1/2,1/2], 0 outside (-1,1),
/// strictly monotone in between. Shared by cap cutoffs, shell windows and
/// support envelopes so smoothness constants match everywhere.
inline double smooth_profile(double t) {
    double a = std::abs(t);
    if (a <= 0.5) return 1.0;
    if (a >= 1.0) return 0.0;
    auto phi = [](double u) { return u > 0 ? std::exp(-1.0 / u) : 0.0; };
    double s = 2.0 * (1.0 - a);  // 1 at |t|=1/2, 0 at |t|=1
    return phi(s) / (phi(s) + phi(1.0 - s));
}

}  // namespace rlab
