#include "etdms/phi.hpp"

#include <cmath>
#include <stdexcept>

namespace etdms {

namespace {

// Normalized phi_j / tau^{j+1} by Taylor series (x = z*tau small).
double phi_hat_series(double x, int j) {
    double term = 1.0 / (j + 1);
    double acc = term;
    for (int m = 1; m < 400; ++m) {
        term *= -x / (m + j + 1);
        acc += term;
        if (std::abs(term) <= 1e-18 * std::abs(acc)) break;
    }
    return acc;
}

}  // namespace

void phi_values(double z, double tau, int jmax, double* out, double cutoff) {
    if (z < 0.0) throw std::invalid_argument("phi_values: z must be >= 0");
    if (!(tau > 0.0)) throw std::invalid_argument("phi_values: tau must be > 0");
    if (jmax < 0) throw std::invalid_argument("phi_values: jmax must be >= 0");
    const double x = z * tau;
    if (x <= cutoff) {
        double scale = tau;
        for (int j = 0; j <= jmax; ++j) {
            out[j] = scale * phi_hat_series(x, j);
            scale *= tau;
        }
    } else {
        out[0] = -std::expm1(-x) / z;
        double tpow = 1.0;
        for (int j = 1; j <= jmax; ++j) {
            tpow *= tau;
            out[j] = (tpow - j * out[j - 1]) / z;
        }
    }
}

Rk4Coef etdrk4_coeffs(double z, double tau) {
    if (z < 0.0) throw std::invalid_argument("etdrk4_coeffs: z must be >= 0");
    Rk4Coef c;
    const double x = z * tau;
    c.E = std::exp(-x);
    c.E2 = std::exp(-0.5 * x);
    double q0;
    phi_values(z, 0.5 * tau, 0, &q0);
    c.Q = q0;
    if (x >= 4.0) {
        // Closed-form brackets; every term is nonnegative in this range, so
        // there is no cancellation.
        const double ex = c.E;
        const double x3 = x * x * x;
        c.f1 = -tau * ((x - 4.0) + ex * (4.0 + 3.0 * x + x * x)) / x3;
        c.f2x2 = 2.0 * tau * ((x - 2.0) + ex * (2.0 + x)) / x3;
        c.f3 = tau * ((x * x - 3.0 * x + 4.0) - ex * (4.0 + x)) / x3;
    } else {
        const double p0 = phi_hat_series(x, 0);
        const double p1 = phi_hat_series(x, 1);
        const double p2 = phi_hat_series(x, 2);
        c.f1 = tau * (p0 - 3.0 * p1 + 2.0 * p2);
        c.f2x2 = 2.0 * tau * (p1 - p2);
        c.f3 = tau * (2.0 * p2 - p1);
    }
    return c;
}

}  // namespace etdms
