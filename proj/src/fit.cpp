#include "rlab/fit.hpp"

#include <cmath>
#include <stdexcept>

namespace rlab {

ScalingFit fit_power_law(const std::vector<double>& scales,
                         const std::vector<double>& values) {
    if (scales.size() != values.size())
        throw std::invalid_argument("fit_power_law: length mismatch");
    const std::size_t m = scales.size();
    if (m < 3) throw std::invalid_argument("fit_power_law: need at least 3 samples");

    std::vector<double> lx(m), ly(m);
    for (std::size_t i = 0; i < m; ++i) {
        if (!(scales[i] > 0) || !(values[i] > 0))
            throw std::invalid_argument("fit_power_law: scales and values must be positive");
        lx[i] = std::log(scales[i]);
        ly[i] = std::log(values[i]);
    }
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < m; ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= m;
    my /= m;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < m; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (sxx == 0) throw std::invalid_argument("fit_power_law: degenerate scales");

    ScalingFit fit;
    fit.exponent = sxy / sxx;
    fit.log_prefactor = my - fit.exponent * mx;
    double rss = 0;
    for (std::size_t i = 0; i < m; ++i) {
        double r = ly[i] - (fit.log_prefactor + fit.exponent * lx[i]);
        rss += r * r;
    }
    fit.residual = std::sqrt(rss / m);
    return fit;
}

}  // namespace rlab
