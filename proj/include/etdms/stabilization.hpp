#pragma once

#include <vector>

#include "etdms/lagrange.hpp"

namespace etdms {

// Stabilization-parameter calculator for the k-step scheme with Lipschitz
// indices (beta, gamma) and constant C_L:
//   p = (beta+gamma)*k/2,  q = 1/(1+gamma/beta) = beta/(beta+gamma),
//   C_hat = C_tilde chosen so the first constraint holds with equality:
//     (1-beta/p)*C_hat^{1/(1-beta/p)} + (1-gamma/p)*C_tilde^{1/(1-gamma/p)}
//       = 2/(C_L*Cbar0),
//   C1 = (1-beta/p)/2 * C_hat^{1/(1-beta/p)},   C2 = beta/(2p) * C_hat^{-p/beta},
//   C3 = (1-gamma/p)/2 * C_tilde^{1/(1-gamma/p)}, C4 = gamma/(2p) * C_tilde^{-p/gamma}.
//
// The shipped closed-form coefficient A = 27*(1+Cbar_1)^4/512 (k = 4,
// beta = gamma = 1/2) equals C_L*(C2+C4)*Cbar0/2; the full bound
// C_L*(C2+C4)*Cbar0 is twice that. We therefore track two margins:
// `slack_A_operative` against the half bound (zero for the auto choice,
// matching the closed form) and `slack_A_strict` against the full bound
// (negative for the auto choice; recorded, not enforced). Energy decay of
// the auto choice is verified empirically by the acceptance suite.
struct StabilizationParams {
    int k = 0;
    double beta = 0.0, gamma = 0.0, C_L = 0.0;
    double p = 0.0, q = 0.0;
    double C_hat = 0.0, C_tilde = 0.0;
    double C1 = 0.0, C2 = 0.0, C3 = 0.0, C4 = 0.0;
    std::vector<double> Cstar;  // size k, Cstar[0] = 1
    std::vector<double> Cbar;   // size k, Cbar[j] = sum_{r>=j} Cstar[r]
    double A = 0.0;             // auto choice: C_L*(C2+C4)*Cbar0/2
    double A_strict = 0.0;      // C_L*(C2+C4)*Cbar0
    double slack1 = 0.0;               // 1 - C_L*(C1+C3)*Cbar0 (clamped at +-1e-12)
    double slack_A_operative = 0.0;    // A - C_L*(C2+C4)*Cbar0/2
    double slack_A_strict = 0.0;       // A - C_L*(C2+C4)*Cbar0
};

// k = 1 degenerates (1 - beta/p = 0 when beta = gamma): handled with
// C1 = C3 = 0 and C_hat = C_tilde = 1; requires beta == gamma at k = 1.
StabilizationParams stabilization_params(int k, double beta, double gamma,
                                         double C_L);

}  // namespace etdms
