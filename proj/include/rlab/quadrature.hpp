#pragma once

#include <functional>

#include "rlab/grid.hpp"

namespace rlab {

/// Adaptive Simpson integral of a complex integrand over [a, b]. Bisects
/// until the Richardson error estimate of a subinterval drops below its
/// share of tol (absolute). depth caps the recursion.
cplx integrate(const std::function<cplx(double)>& f, double a, double b,
               double tol = 1e-10, int depth = 48);

}  // namespace rlab
