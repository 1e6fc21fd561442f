#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <vector>

namespace etdms {

using Rational = boost::multiprecision::cpp_rational;

// Shifted Lagrange basis on the node set {0, -1, ..., -(k-1)} in the
// normalized variable sigma = s/tau:
//   l_i(sigma) = sum_j xi_hat[i][j] * sigma^j,   xi_{i,j} = xi_hat[i][j] / tau^j.
// Constructed exactly over the rationals, converted to double at the end.
struct LagrangeTable {
    int k = 0;
    std::vector<std::vector<double>> xi_hat;            // k x k
    std::vector<std::vector<Rational>> xi_hat_exact;    // k x k
};

// 1 <= k <= 8 (extrapolation weights degrade in double beyond that).
LagrangeTable lagrange_table(int k);

// Evaluates l_i(sigma) in double from the table.
double lagrange_eval(const LagrangeTable& t, int i, double sigma);

// Squared interpolation constants (exact rationals), j = 0..k-1 with
// Cstar_sq[0] = 1 by convention. For j >= 1 these are integrals over
// sigma in [0,1] of the squared deviation polynomial. Note: for k = 4,
// j = 2 the established constant chain (the one the closed-form
// stabilization coefficient A = 27*(1+Cbar_1)^4/512 is built from) uses
// the sign-variant integrand (1 - l0 + l1)^2; the plain integrand
// (1 - l0 - l1)^2 evaluates to 16003/7560 and is available via
// `plain_integrand = true`.
std::vector<Rational> cstar_squared(const LagrangeTable& t,
                                    bool plain_integrand = false);

// Square roots of cstar_squared in double.
std::vector<double> cstar_constants(const LagrangeTable& t);

}  // namespace etdms
