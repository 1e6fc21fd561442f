#include <doctest.h>

#include <cmath>
#include <deque>
#include <stdexcept>
#include <vector>

#include "etdms/lagrange.hpp"
#include "etdms/phi.hpp"
#include "etdms/quadrature.hpp"

using namespace etdms;

namespace {

// Independent oracle: phi_j(z, tau) = int_0^tau e^{-z th} (tau - th)^j dth by
// 64-point Gauss-Legendre. For large z the integrand is supported near 0;
// restricting to [0, min(tau, 60/z)] discards a tail below e^{-60}.
double phi_oracle(double z, double tau, int j) {
    static const GaussLegendre gl = gauss_legendre(64);
    const double h = z > 0.0 ? std::min(tau, 60.0 / z) : tau;
    double acc = 0.0;
    for (std::size_t q = 0; q < gl.x.size(); ++q) {
        const double th = 0.5 * h * (gl.x[q] + 1.0);
        acc += 0.5 * h * gl.w[q] * std::exp(-z * th) * std::pow(tau - th, j);
    }
    return acc;
}

}  // namespace

TEST_CASE("phi at z = 0 is the monomial integral tau^{j+1}/(j+1)") {
    const double tau = 0.37;
    double out[8];
    phi_values(0.0, tau, 7, out);
    for (int j = 0; j <= 7; ++j) {
        const double want = std::pow(tau, j + 1) / (j + 1);
        CHECK(out[j] == doctest::Approx(want).epsilon(1e-15));
    }
}

TEST_CASE("phi_0(1, 1) = 1 - 1/e") {
    double out[1];
    phi_values(1.0, 1.0, 0, out);
    CHECK(out[0] == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-15));
}

TEST_CASE("phi matches the quadrature oracle across twenty decades") {
    for (double z : {1e-12, 1e-8, 1e-4, 1e-2, 0.5, 1.0, 3.9, 4.1, 10.0, 1e2,
                     1e4, 1e6, 1e8}) {
        for (double tau : {1e-3, 0.25, 1.0, 2.5}) {
            double out[8];
            phi_values(z, tau, 7, out);
            for (int j = 0; j <= 7; ++j) {
                const double ref = phi_oracle(z, tau, j);
                CHECK(std::abs(out[j] - ref) <= 1e-12 * ref);
                CHECK(out[j] > 0.0);
            }
        }
    }
}

TEST_CASE("series and recurrence branches agree near the crossover") {
    // Same (z, tau), forced down each branch via the cutoff parameter.
    for (double x : {3.0, 3.9, 4.0, 4.1, 5.0}) {
        const double tau = 0.8, z = x / tau;
        double series[8], recur[8];
        phi_values(z, tau, 7, series, /*cutoff=*/1e9);   // always series
        phi_values(z, tau, 7, recur, /*cutoff=*/1e-9);   // always recurrence
        for (int j = 0; j <= 7; ++j)
            CHECK(std::abs(series[j] - recur[j]) <= 1e-13 * series[j]);
    }
}

TEST_CASE("phi argument validation") {
    double out[2];
    CHECK_THROWS_AS(phi_values(-1.0, 1.0, 1, out), std::invalid_argument);
    CHECK_THROWS_AS(phi_values(1.0, 0.0, 1, out), std::invalid_argument);
    CHECK_THROWS_AS(phi_values(1.0, -0.5, 1, out), std::invalid_argument);
    CHECK_THROWS_AS(phi_values(1.0, 1.0, -1, out), std::invalid_argument);
    CHECK_THROWS_AS(etdrk4_coeffs(-0.1, 1.0), std::invalid_argument);
}

TEST_CASE("one-step coefficients reach their z -> 0 limits") {
    const double tau = 0.2;
    const auto c = etdrk4_coeffs(0.0, tau);
    CHECK(c.E == 1.0);
    CHECK(c.E2 == 1.0);
    CHECK(c.Q == doctest::Approx(tau / 2).epsilon(1e-15));
    CHECK(c.f1 == doctest::Approx(tau / 6).epsilon(1e-14));
    CHECK(c.f2x2 == doctest::Approx(tau / 3).epsilon(1e-14));
    CHECK(c.f3 == doctest::Approx(tau / 6).epsilon(1e-14));

    const auto tiny = etdrk4_coeffs(1e-9, tau);
    CHECK(tiny.f1 == doctest::Approx(tau / 6).epsilon(1e-8));
    CHECK(tiny.f2x2 == doctest::Approx(tau / 3).epsilon(1e-8));
    CHECK(tiny.f3 == doctest::Approx(tau / 6).epsilon(1e-8));
}

TEST_CASE("one-step coefficients satisfy their phi-combination identities") {
    // f1 = tau (ph0 - 3 ph1 + 2 ph2), f2x2 = 2 tau (ph1 - ph2),
    // f3 = tau (2 ph2 - ph1), with ph_j = phi_j(z, tau)/tau^{j+1}; these hold
    // on both sides of the internal branch switch.
    for (double x : {1e-8, 1e-3, 0.1, 1.0, 3.0, 4.0, 5.0, 10.0, 100.0}) {
        const double tau = 0.5, z = x / tau;
        const auto c = etdrk4_coeffs(z, tau);
        double ph[3];
        phi_values(z, tau, 2, ph);
        const double ph0 = ph[0] / tau, ph1 = ph[1] / (tau * tau),
                     ph2 = ph[2] / (tau * tau * tau);
        CHECK(c.E == doctest::Approx(std::exp(-z * tau)).epsilon(1e-14));
        CHECK(c.E2 == doctest::Approx(std::exp(-z * tau / 2)).epsilon(1e-14));
        double q[1];
        phi_values(z, tau / 2, 0, q);
        CHECK(c.Q == doctest::Approx(q[0]).epsilon(1e-13));
        CHECK(c.f1 ==
              doctest::Approx(tau * (ph0 - 3 * ph1 + 2 * ph2)).epsilon(1e-10));
        CHECK(c.f2x2 == doctest::Approx(2 * tau * (ph1 - ph2)).epsilon(1e-10));
        CHECK(c.f3 == doctest::Approx(tau * (2 * ph2 - ph1)).epsilon(1e-10));
    }
}

TEST_CASE("the four-step weights integrate a scalar ODE at fourth order") {
    // u' = -u + cos t, u(0) = 2, exact u = 3/2 e^{-t} + (cos t + sin t)/2.
    // The multistep update u_{n+1} = e^{-z tau} u_n + sum_i w_i N(t_{n-i})
    // with w_i = sum_j xi_hat[i][j] phi_j / tau^j is seeded with exact data.
    const auto table = lagrange_table(4);
    const double z = 1.0;
    const auto exact = [](double t) {
        return 1.5 * std::exp(-t) + 0.5 * (std::cos(t) + std::sin(t));
    };
    const auto force = [](double t) { return std::cos(t); };

    const auto run = [&](double tau) {
        double phis[4];
        phi_values(z, tau, 3, phis);
        double w[4] = {0, 0, 0, 0};
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                w[i] += table.xi_hat[i][j] * phis[j] / std::pow(tau, j);
        const double E = std::exp(-z * tau);
        const long n = std::lround(1.0 / tau);
        double u = exact(3 * tau);
        std::deque<double> hist = {force(3 * tau), force(2 * tau), force(tau),
                                   force(0.0)};  // newest first
        for (long s = 3; s < n; ++s) {
            double next = E * u;
            for (int i = 0; i < 4; ++i) next += w[i] * hist[i];
            u = next;
            hist.pop_back();
            hist.push_front(force((s + 1) * tau));
        }
        return std::abs(u - exact(1.0));
    };

    const double e1 = run(1.0 / 64), e2 = run(1.0 / 128);
    CHECK(e2 < e1);
    const double order = std::log2(e1 / e2);
    CHECK(order >= 3.7);
    CHECK(order <= 4.3);
}
