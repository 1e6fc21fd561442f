#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "etdms/lagrange.hpp"
#include "etdms/quadrature.hpp"

using namespace etdms;

TEST_CASE("k = 4 extrapolation coefficients match the closed forms") {
    const auto t = lagrange_table(4);
    REQUIRE(t.k == 4);

    const Rational want[4][4] = {
        {Rational(1), Rational(11, 6), Rational(1), Rational(1, 6)},
        {Rational(0), Rational(-3), Rational(-5, 2), Rational(-1, 2)},
        {Rational(0), Rational(3, 2), Rational(2), Rational(1, 2)},
        {Rational(0), Rational(-1, 3), Rational(-1, 2), Rational(-1, 6)},
    };
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            CHECK(t.xi_hat_exact[i][j] == want[i][j]);
            CHECK(t.xi_hat[i][j] ==
                  doctest::Approx(want[i][j].convert_to<double>()).epsilon(1e-15));
        }
    }
}

TEST_CASE("k = 1 degenerates to the constant extrapolant") {
    const auto t = lagrange_table(1);
    CHECK(t.xi_hat_exact[0][0] == Rational(1));
    CHECK(lagrange_eval(t, 0, 0.37) == doctest::Approx(1.0).epsilon(1e-16));
    CHECK(lagrange_eval(t, 0, -2.5) == doctest::Approx(1.0).epsilon(1e-16));
}

TEST_CASE("partition of unity and cardinality on the node set") {
    for (int k = 1; k <= 8; ++k) {
        const auto t = lagrange_table(k);
        // sum_i l_i(sigma) = 1 on the extrapolation interval.
        for (double sigma : {0.0, 0.25, 0.5, 0.75, 1.0}) {
            double sum = 0.0;
            for (int i = 0; i < k; ++i) sum += lagrange_eval(t, i, sigma);
            CHECK(std::abs(sum - 1.0) <= (k <= 4 ? 1e-14 : 1e-12));
        }
        // l_i(-j) = delta_ij on the nodes {0, -1, ..., -(k-1)}. Evaluation
        // uses monomial coefficients, whose cancellation at the far nodes
        // grows with k; allow for that conditioning above k = 4.
        for (int i = 0; i < k; ++i) {
            for (int j = 0; j < k; ++j) {
                const double v = lagrange_eval(t, i, -static_cast<double>(j));
                CHECK(std::abs(v - (i == j ? 1.0 : 0.0)) <=
                      (k <= 4 ? 1e-14 : 1e-11));
            }
        }
    }
}

TEST_CASE("squared interpolation constants for k = 4 are exact rationals") {
    const auto t = lagrange_table(4);
    const auto sq = cstar_squared(t);
    REQUIRE(sq.size() == 4);
    CHECK(sq[0] == Rational(1));
    CHECK(sq[1] == Rational(9143, 3780));
    CHECK(sq[2] == Rational(157441, 7560));
    CHECK(sq[3] == Rational(212, 945));

    // The plain (un-flipped) j = 2 integrand evaluates differently.
    const auto plain = cstar_squared(t, true);
    CHECK(plain[1] == sq[1]);
    CHECK(plain[2] == Rational(16003, 7560));
    CHECK(plain[3] == sq[3]);

    const auto c = cstar_constants(t);
    CHECK(c[0] == 1.0);
    CHECK(c[1] == doctest::Approx(std::sqrt(9143.0 / 3780.0)).epsilon(1e-15));
    CHECK(c[2] == doctest::Approx(std::sqrt(157441.0 / 7560.0)).epsilon(1e-15));
    CHECK(c[3] == doctest::Approx(std::sqrt(212.0 / 945.0)).epsilon(1e-15));
}

TEST_CASE("squared constants agree with 64-point quadrature of the integrand") {
    // Independently rebuild the deviation polynomials
    //   d_j(sigma) = 1 - sum_{i<j} s_i l_i(sigma)
    // (with the established sign flip at k = 4, j = 2, i = 1) and integrate
    // d_j^2 over [0,1] with Gauss-Legendre instead of exact arithmetic.
    for (int k : {2, 3, 4, 5}) {
        const auto t = lagrange_table(k);
        const auto sq = cstar_squared(t);
        const auto gl = gauss_legendre(64);
        for (int j = 1; j < k; ++j) {
            double acc = 0.0;
            for (std::size_t q = 0; q < gl.x.size(); ++q) {
                const double sigma = 0.5 * (gl.x[q] + 1.0);
                double d = 1.0;
                for (int i = 0; i < j; ++i) {
                    const double sign =
                        (k == 4 && j == 2 && i == 1) ? 1.0 : -1.0;
                    d += sign * lagrange_eval(t, i, sigma);
                }
                acc += 0.5 * gl.w[q] * d * d;
            }
            CHECK(std::abs(acc - sq[j].convert_to<double>()) <=
                  1e-12 * std::max(1.0, sq[j].convert_to<double>()));
        }
    }
}

TEST_CASE("lagrange_table validates k and basis indices") {
    CHECK_THROWS_AS(lagrange_table(0), std::invalid_argument);
    CHECK_THROWS_AS(lagrange_table(9), std::invalid_argument);
    CHECK_THROWS_AS(lagrange_table(-1), std::invalid_argument);
    const auto t = lagrange_table(3);
    CHECK_THROWS_AS(lagrange_eval(t, 3, 0.5), std::out_of_range);
    CHECK_THROWS_AS(lagrange_eval(t, -1, 0.5), std::out_of_range);
}
