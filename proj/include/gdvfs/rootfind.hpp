#pragma once

namespace gdvfs {

/// a_top f^(e+1) + a_mid f^e + a_quad f^2 - rhs with a_mid > 0 and the other
/// coefficients >= 0: strictly increasing and convex on f > 0, negative at
/// f = 0+ whenever rhs > 0, hence exactly one positive root. This one family
/// covers the per-level stationarity polynomial, the serial-ratio cubic and
/// the reference-frequency derivative.
struct PowerPolynomial {
    double a_top = 0.0;
    double a_mid = 0.0;
    double a_quad = 0.0;
    double rhs = 0.0;
    double exponent = 2.0;  ///< e >= 2

    double operator()(double f) const;
    double derivative(double f) const;

    /// Bracketed bisection to ~1e-6 relative, then Newton polished to
    /// ~1e-14 relative with iterates guarded to stay inside the bracket.
    /// Requires a_mid > 0 and rhs > 0.
    double positive_root() const;
};

}  // namespace gdvfs
