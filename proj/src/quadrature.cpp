#include "etdms/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace etdms {

GaussLegendre gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
    GaussLegendre gl;
    gl.x.resize(n);
    gl.w.resize(n);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        // Chebyshev-like initial guess for the i-th positive root.
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            // Legendre P_n(x) and derivative via the three-term recurrence.
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= n; ++j) {
                const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        gl.x[i] = -x;
        gl.w[i] = w;
        gl.x[n - 1 - i] = x;
        gl.w[n - 1 - i] = w;
    }
    if (n % 2 == 1) gl.x[n / 2] = 0.0;
    return gl;
}

}  // namespace etdms
