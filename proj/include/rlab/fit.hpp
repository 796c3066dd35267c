#pragma once

#include <vector>

namespace rlab {

/// Least-squares fit of log(value) against log(scale).
struct ScalingFit {
    double exponent = 0;        // slope
    double log_prefactor = 0;   // intercept
    double residual = 0;        // rms of log residuals
};

/// Requires >= 3 samples, all scales and values strictly positive.
ScalingFit fit_power_law(const std::vector<double>& scales,
                         const std::vector<double>& values);

}  // namespace rlab
