#include <doctest.h>

#include <cmath>
#include <initializer_list>

#include "ionsplit/perturbation.hpp"

using namespace ionsplit;

TEST_CASE("perturbation_coefficient: hand-evaluated values and symmetry") {
    // j=3, C=1, d=2, m=1: +1 * 1/2^4 * 2^(3/2) = sqrt(2)/8
    CHECK(perturbation_coefficient(1.0, 2.0, 3) ==
          doctest::Approx(std::sqrt(2.0) / 8.0).epsilon(1e-14));
    // j=4, C=1, d=1, m=1: -1 * 1 * 2^2
    CHECK(perturbation_coefficient(1.0, 1.0, 4) == doctest::Approx(-4.0).epsilon(1e-14));
    // mass enters only through (2/m)^(j/2)
    CHECK(perturbation_coefficient(3.0, 1.5, 3, 2.0) ==
          doctest::Approx(3.0 / std::pow(1.5, 4)).epsilon(1e-14));
    // odd orders attract, even orders repel: signs alternate
    CHECK(perturbation_coefficient(1.0, 1.0, 3) > 0);
    CHECK(perturbation_coefficient(1.0, 1.0, 4) < 0);
    CHECK(perturbation_coefficient(1.0, 1.0, 5) > 0);
}

TEST_CASE("displaced ground-level moments: closed Gaussian forms") {
    const double s2 = 0.37, x = -0.8;
    CHECK(displaced_moment_n0(0, s2, x) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(displaced_moment_n0(1, s2, x) == doctest::Approx(x).epsilon(1e-14));
    CHECK(displaced_moment_n0(2, s2, x) == doctest::Approx(x * x + s2).epsilon(1e-14));
    CHECK(displaced_moment_n0(3, s2, x) ==
          doctest::Approx(x * x * x + 3 * x * s2).epsilon(1e-14));
    CHECK(displaced_moment_n0(4, s2, x) ==
          doctest::Approx(x * x * x * x + 6 * x * x * s2 + 3 * s2 * s2).epsilon(1e-14));
    // centered odd moments vanish
    CHECK(std::abs(displaced_moment_n0(3, s2, 0.0)) < 1e-15);
}

TEST_CASE("displaced_moment n=0 equals the closed form with sigma^2 = rho^2/(2 omega0)") {
    const double rho = 1.3, w0 = std::sqrt(3.0), x = 0.45;
    const double s2 = rho * rho / (2 * w0);
    for (int p = 0; p <= 6; ++p)
        CHECK(displaced_moment(0, p, rho, w0, x) ==
              doctest::Approx(displaced_moment_n0(p, s2, x)).epsilon(1e-12));
}

TEST_CASE("quadrature moments for excited levels match closed oscillator forms") {
    // level n of a scaled oscillator: <xi^2> = (2n+1) rho^2 / (2 w0),
    // <xi^4> = 3 (2n^2 + 2n + 1) rho^4 / (4 w0^2), odd central moments zero.
    for (int n : {1, 2, 3}) {
        for (double rho : {0.8, 1.0, 1.45}) {
            const double w0 = 1.7;
            const double x = 0.6;
            const double var = (2 * n + 1) * rho * rho / (2 * w0);
            const double c4 =
                3.0 * (2 * n * n + 2 * n + 1) * std::pow(rho, 4) / (4 * w0 * w0);

            CHECK(displaced_moment(n, 0, rho, w0, x) == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(displaced_moment(n, 1, rho, w0, x) == doctest::Approx(x).epsilon(1e-12));
            CHECK(displaced_moment(n, 2, rho, w0, x) ==
                  doctest::Approx(x * x + var).epsilon(1e-11));
            CHECK(displaced_moment(n, 3, rho, w0, x) ==
                  doctest::Approx(x * x * x + 3 * x * var).epsilon(1e-11));
            CHECK(displaced_moment(n, 4, rho, w0, x) ==
                  doctest::Approx(std::pow(x, 4) + 6 * x * x * var + c4).epsilon(1e-10));
        }
    }
}

TEST_CASE("delta_energy factorizes into coefficient times moment") {
    const double cc = 7.3e6, d = 2450.0, rho = 1.31, w0 = std::sqrt(3.0);
    for (int j : {3, 4, 5}) {
        for (int n : {0, 1}) {
            const double x = 0.2;
            const double expect = perturbation_coefficient(cc, d, j) *
                                  displaced_moment(n, j, rho, w0, x);
            CHECK(delta_energy(cc, d, j, n, rho, w0, x) ==
                  doctest::Approx(expect).epsilon(1e-13));
        }
    }
    // cubic correction vanishes for a centered state and is linear nearby
    CHECK(std::abs(delta_energy(1.0, 10.0, 3, 0, 1.0, 1.0, 0.0)) < 1e-15);
    const double e1 = delta_energy(1.0, 10.0, 3, 0, 1.0, 1.0, 1e-4);
    const double e2 = delta_energy(1.0, 10.0, 3, 0, 1.0, 1.0, 2e-4);
    CHECK(e2 == doctest::Approx(2 * e1).epsilon(1e-6));
}
