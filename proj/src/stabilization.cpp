#include "etdms/stabilization.hpp"

#include <cmath>
#include <stdexcept>

namespace etdms {

namespace {

double clamp_tiny(double x, double tol = 1e-12) {
    return std::abs(x) <= tol ? 0.0 : x;
}

}  // namespace

StabilizationParams stabilization_params(int k, double beta, double gamma,
                                         double C_L) {
    if (k < 1 || k > 8) throw std::invalid_argument("stabilization_params: k in [1,8]");
    if (!(beta > 0.0) || !(gamma > 0.0) || !(C_L > 0.0)) {
        throw std::invalid_argument("stabilization_params: beta, gamma, C_L must be > 0");
    }

    StabilizationParams sp;
    sp.k = k;
    sp.beta = beta;
    sp.gamma = gamma;
    sp.C_L = C_L;
    sp.p = (beta + gamma) * k / 2.0;
    sp.q = beta / (beta + gamma);

    const auto table = lagrange_table(k);
    sp.Cstar = cstar_constants(table);
    sp.Cbar.assign(k, 0.0);
    double run = 0.0;
    for (int j = k - 1; j >= 0; --j) {
        run += sp.Cstar[j];
        sp.Cbar[j] = run;
    }
    const double cbar0 = sp.Cbar[0];

    const double eb = 1.0 - beta / sp.p;   // exponent weight for C_hat
    const double eg = 1.0 - gamma / sp.p;  // exponent weight for C_tilde

    if (k == 1) {
        if (beta != gamma) {
            throw std::invalid_argument(
                "stabilization_params: k = 1 requires beta == gamma");
        }
        // eb = eg = 0: the first constraint is vacuous; any positive constant
        // works, take C_hat = C_tilde = 1.
        sp.C_hat = sp.C_tilde = 1.0;
        sp.C1 = sp.C3 = 0.0;
    } else {
        if (!(eb > 0.0) || !(eg > 0.0)) {
            throw std::invalid_argument(
                "stabilization_params: need beta < p and gamma < p");
        }
        const double target = 2.0 / (C_L * cbar0);
        if (beta == gamma) {
            sp.C_hat = std::pow(1.0 / (eb * C_L * cbar0), eb);
            sp.C_tilde = sp.C_hat;
        } else {
            // F(C) = eb*C^{1/eb} + eg*C^{1/eg} is strictly increasing; bisect
            // for F(C) = target in log space.
            auto F = [&](double c) {
                return eb * std::pow(c, 1.0 / eb) + eg * std::pow(c, 1.0 / eg);
            };
            double lo = -60.0, hi = 60.0;  // log10 bounds
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (lo + hi);
                (F(std::pow(10.0, mid)) < target ? lo : hi) = mid;
            }
            sp.C_hat = std::pow(10.0, 0.5 * (lo + hi));
            sp.C_tilde = sp.C_hat;
        }
        sp.C1 = 0.5 * eb * std::pow(sp.C_hat, 1.0 / eb);
        sp.C3 = 0.5 * eg * std::pow(sp.C_tilde, 1.0 / eg);
    }
    sp.C2 = beta / (2.0 * sp.p) * std::pow(sp.C_hat, -sp.p / beta);
    sp.C4 = gamma / (2.0 * sp.p) * std::pow(sp.C_tilde, -sp.p / gamma);

    sp.A_strict = C_L * (sp.C2 + sp.C4) * cbar0;
    sp.A = 0.5 * sp.A_strict;
    sp.slack1 = clamp_tiny(1.0 - C_L * (sp.C1 + sp.C3) * cbar0);
    sp.slack_A_operative = clamp_tiny(sp.A - 0.5 * C_L * (sp.C2 + sp.C4) * cbar0);
    sp.slack_A_strict = sp.A - sp.A_strict;
    return sp;
}

}  // namespace etdms
