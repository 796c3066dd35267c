#include "rlab/quadrature.hpp"

namespace rlab {

namespace {

cplx simpson(const cplx& fa, const cplx& fm, const cplx& fb, double h) {
    return (fa + 4.0 * fm + fb) * (h / 6.0);
}

cplx adapt(const std::function<cplx(double)>& f, double a, double b, const cplx& fa,
           const cplx& fm, const cplx& fb, const cplx& whole, double tol, int depth) {
    double m = 0.5 * (a + b);
    cplx fl = f(0.5 * (a + m));
    cplx fr = f(0.5 * (m + b));
    cplx left = simpson(fa, fl, fm, m - a);
    cplx right = simpson(fm, fr, fb, b - m);
    cplx delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adapt(f, a, m, fa, fl, fm, left, 0.5 * tol, depth - 1) +
           adapt(f, m, b, fm, fr, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

cplx integrate(const std::function<cplx(double)>& f, double a, double b, double tol,
               int depth) {
    if (!(b > a)) throw std::invalid_argument("integrate: need b > a");
    if (!(tol > 0)) throw std::invalid_argument("integrate: need tol > 0");
    cplx fa = f(a), fm = f(0.5 * (a + b)), fb = f(b);
    cplx whole = simpson(fa, fm, fb, b - a);
    return adapt(f, a, b, fa, fm, fb, whole, tol, depth);
}

}  // namespace rlab
