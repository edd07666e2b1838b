#include "gdvfs/rootfind.hpp"

#include <algorithm>
#include <cmath>

#include "gdvfs/errors.hpp"

namespace gdvfs {

double PowerPolynomial::operator()(double f) const {
    return a_top * std::pow(f, exponent + 1.0) + a_mid * std::pow(f, exponent) +
           a_quad * f * f - rhs;
}

double PowerPolynomial::derivative(double f) const {
    return a_top * (exponent + 1.0) * std::pow(f, exponent) +
           a_mid * exponent * std::pow(f, exponent - 1.0) + 2.0 * a_quad * f;
}

double PowerPolynomial::positive_root() const {
    if (!(a_mid > 0.0) || a_top < 0.0 || a_quad < 0.0)
        throw InvalidArgument("power polynomial needs a_mid > 0 and coefficients >= 0");
    if (!(rhs > 0.0) || !std::isfinite(rhs))
        throw InvalidArgument("power polynomial needs rhs > 0");

    // Single-term collapse has a closed form.
    if (a_top == 0.0 && a_quad == 0.0) return std::pow(rhs / a_mid, 1.0 / exponent);

    // At hi the a_mid term alone reaches rhs; at lo every present term is
    // below rhs/3, so the bracket is a guaranteed sign change.
    double hi = std::pow(rhs / a_mid, 1.0 / exponent);
    double lo = hi;
    if (a_top > 0.0) lo = std::min(lo, std::pow(rhs / (3.0 * a_top), 1.0 / (exponent + 1.0)));
    lo = std::min(lo, std::pow(rhs / (3.0 * a_mid), 1.0 / exponent));
    if (a_quad > 0.0) lo = std::min(lo, std::sqrt(rhs / (3.0 * a_quad)));

    for (int i = 0; i < 200 && hi - lo > 1e-6 * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        ((*this)(mid) > 0.0 ? hi : lo) = mid;
    }

    // Newton from the convex side, guarded by the bracket.
    double x = hi;
    for (int i = 0; i < 60; ++i) {
        const double value = (*this)(x);
        const double slope = derivative(x);
        if (slope <= 0.0) break;
        double next = x - value / slope;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        (value > 0.0 ? hi : lo) = x;
        const double step = std::abs(next - x);
        x = next;
        if (step <= 1e-14 * x) break;
    }
    return x;
}

}  // namespace gdvfs
