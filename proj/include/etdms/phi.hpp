#pragma once

#include <array>

namespace etdms {

// phi_j(z, tau) = integral_0^tau exp(-z*(tau-s)) * s^j ds, j = 0..jmax.
//
// For x = z*tau > cutoff the stable upward recurrence is used:
//   phi_0 = (1 - e^{-x})/z,  phi_j = (tau^j - j*phi_{j-1})/z.
// For x <= cutoff the recurrence cancels catastrophically; the Taylor series
// of the normalized integral phi_j/tau^{j+1} = j! * sum_m (-x)^m/(m+j+1)! is
// summed until terms fall below 1e-18 relative. The default cutoff 4.0 is
// where both branches agree to better than 1e-15 for j <= 7; lower values
// (e.g. 1e-2) lose digits in the recurrence at high j.
void phi_values(double z, double tau, int jmax, double* out,
                double cutoff = 4.0);

// Single-step ETD-RK4 per-mode coefficients for the decay operator z >= 0:
//   u* update uses E2 = e^{-z tau/2} and Q = phi_0(z, tau/2);
//   final combination u^{n+1} = E u^n + f1*N1 + f2x2/2*(N2+N3)... see stepper.
// f1 -> tau/6, f2x2 -> tau/3, f3 -> tau/6 as z -> 0.
struct Rk4Coef {
    double E = 0.0;     // e^{-z tau}
    double E2 = 0.0;    // e^{-z tau/2}
    double Q = 0.0;     // phi_0(z, tau/2)
    double f1 = 0.0;    // weight of N(u_n)
    double f2x2 = 0.0;  // combined weight of N(a) + N(b)
    double f3 = 0.0;    // weight of N(c)
};

Rk4Coef etdrk4_coeffs(double z, double tau);

}  // namespace etdms
