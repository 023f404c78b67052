#include <doctest.h>

#include "numerics.hpp"

#include <cmath>

using namespace mhtc;

TEST_CASE("binomials are exact") {
    CHECK(num::binom(0, 0) == 1.0);
    CHECK(num::binom(5, 2) == 10.0);
    CHECK(num::binom(20, 10) == 184756.0);
    CHECK(num::binom(4, 5) == 0.0);
    CHECK(num::binom(7, -1) == 0.0);
}

TEST_CASE("beta function against gamma identities") {
    CHECK(num::beta_fn(1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(num::beta_fn(2.0, 3.0) == doctest::Approx(1.0 / 12.0).epsilon(1e-14));
    // B(a, 1-a) = pi / sin(pi a)
    for (double a : {0.25, 0.4, 2.0 / 3.0}) {
        CHECK(num::beta_fn(a, 1.0 - a) ==
              doctest::Approx(M_PI / std::sin(M_PI * a)).epsilon(1e-13));
    }
    CHECK_THROWS(num::beta_fn(-1.0, 2.0));
}

TEST_CASE("regularized lower incomplete gamma, integer order") {
    // P(1, u) = 1 - exp(-u)
    for (double u : {0.01, 0.5, 1.0, 3.0, 10.0})
        CHECK(num::reg_lower_gamma_int(1, u) == doctest::Approx(1.0 - std::exp(-u)).epsilon(1e-14));
    // P(2, u) = 1 - e^-u (1 + u)
    CHECK(num::reg_lower_gamma_int(2, 1.7) ==
          doctest::Approx(1.0 - std::exp(-1.7) * 2.7).epsilon(1e-14));
    CHECK(num::reg_lower_gamma_int(3, 0.0) == 0.0);
    // series and complement branches agree at the switch point
    for (int m : {1, 2, 3, 5, 8}) {
        const double u = m + 1.0;
        const double below = num::reg_lower_gamma_int(m, u * (1.0 - 1e-12));
        const double above = num::reg_lower_gamma_int(m, u * (1.0 + 1e-12));
        CHECK(below == doctest::Approx(above).epsilon(1e-11));
    }
}

TEST_CASE("partial Bell polynomials") {
    // B_{1,1} = x1, B_{2,1} = x2, B_{2,2} = x1^2, B_{3,2} = 3 x1 x2
    std::vector<double> x = {1.5, -0.25, 2.0};
    CHECK(num::partial_bell(1, 1, x) == doctest::Approx(1.5));
    CHECK(num::partial_bell(2, 1, x) == doctest::Approx(-0.25));
    CHECK(num::partial_bell(2, 2, x) == doctest::Approx(2.25));
    CHECK(num::partial_bell(3, 2, x) == doctest::Approx(3.0 * 1.5 * -0.25));
    CHECK(num::partial_bell(0, 0, x) == 1.0);
    CHECK(num::partial_bell(3, 4, x) == 0.0);
}

TEST_CASE("falling factorial and factorial") {
    CHECK(num::falling_factorial(0.5, 1) == doctest::Approx(0.5));
    CHECK(num::falling_factorial(0.5, 2) == doctest::Approx(0.5 * -0.5));
    CHECK(num::falling_factorial(3.0, 3) == doctest::Approx(6.0));
    CHECK(num::factorial_u64(5) == 120);
}
