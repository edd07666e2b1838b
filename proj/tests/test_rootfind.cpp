#include <doctest.h>

#include <cmath>

#include "gdvfs/rootfind.hpp"
#include "gdvfs/errors.hpp"
#include "test_support.hpp"

using namespace gdvfs;
using testing::Rng;

TEST_CASE("single power term collapses to the closed form") {
    PowerPolynomial poly{0.0, 3.0, 0.0, 7.0, 2.7};
    CHECK(poly.positive_root() == std::pow(7.0 / 3.0, 1.0 / 2.7));
}

TEST_CASE("the hand-checked cubic root is reproduced") {
    // 2 f^3 + f^2 - 1 = 0, bisection oracle frozen below.
    PowerPolynomial poly{2.0, 1.0, 0.0, 1.0, 2.0};
    const double oracle =
        testing::bisect_increasing([](double f) { return 2 * f * f * f + f * f - 1; }, 0.0, 1.0);
    const double root = poly.positive_root();
    CHECK(root == doctest::Approx(oracle).epsilon(1e-13));
    CHECK(root == doctest::Approx(0.657298106138376).epsilon(1e-12));
}

TEST_CASE("roots agree with an independent bisection across random coefficients") {
    Rng rng(42);
    for (int i = 0; i < 300; ++i) {
        PowerPolynomial poly;
        poly.a_top = rng.chance(0.25) ? 0.0 : rng.log_uniform(1e-6, 1e6);
        poly.a_mid = rng.log_uniform(1e-6, 1e6);
        poly.a_quad = rng.chance(0.25) ? 0.0 : rng.log_uniform(1e-6, 1e6);
        poly.rhs = rng.log_uniform(1e-6, 1e6);
        poly.exponent = rng.uniform(2.0, 3.0);

        const double root = poly.positive_root();
        double hi = 1.0;
        while (poly(hi) < 0.0) hi *= 2.0;
        const double oracle = testing::bisect_increasing(poly, 0.0, hi);
        CHECK(root == doctest::Approx(oracle).epsilon(1e-10));

        // Residual scaled by the term magnitudes is at the polish level.
        const double scale = poly.a_top * std::pow(root, poly.exponent + 1) +
                             poly.a_mid * std::pow(root, poly.exponent) +
                             poly.a_quad * root * root + poly.rhs;
        CHECK(std::abs(poly(root)) <= 1e-12 * scale);
    }
}

TEST_CASE("the bracket is a certified sign change and the polynomial is increasing") {
    PowerPolynomial poly{0.5, 2.0, 0.3, 4.0, 2.5};
    CHECK(poly(1e-12) < 0.0);  // -rhs at f -> 0+
    double prev = poly(1e-6);
    for (double f = 1e-5; f < 1e4; f *= 10) {
        const double value = poly(f);
        CHECK(value > prev);
        prev = value;
    }
    const double root = poly.positive_root();
    CHECK(poly(root * 0.999) < 0.0);
    CHECK(poly(root * 1.001) > 0.0);
}

TEST_CASE("degenerate coefficient sets are rejected") {
    CHECK_THROWS_AS((PowerPolynomial{1, 0, 0, 1, 2}.positive_root()), InvalidArgument);
    CHECK_THROWS_AS((PowerPolynomial{1, 1, 0, 0, 2}.positive_root()), InvalidArgument);
    CHECK_THROWS_AS((PowerPolynomial{-1, 1, 0, 1, 2}.positive_root()), InvalidArgument);
}
