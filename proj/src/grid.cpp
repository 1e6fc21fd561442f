#include "etdms/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace etdms {

SpectralGrid make_grid(int N, double L, bool dealias) {
    if (N < 4 || N % 2 != 0) {
        throw std::invalid_argument("make_grid: N must be an even integer >= 4");
    }
    if (!(L > 0.0)) {
        throw std::invalid_argument("make_grid: L must be positive");
    }
    SpectralGrid g;
    g.N = N;
    g.L = L;
    g.dx = L / N;
    g.dealias = dealias;

    const double k0 = 2.0 * M_PI / L;
    g.kx.resize(N);
    g.ky.resize(N);
    g.kxd.resize(N);
    g.kyd.resize(N);
    for (int i = 0; i < N; ++i) {
        const int m = g.mode(i);
        g.kx[i] = k0 * m;
        g.ky[i] = k0 * m;
        const bool nyq = (i == N / 2);
        g.kxd[i] = nyq ? 0.0 : g.kx[i];
        g.kyd[i] = nyq ? 0.0 : g.ky[i];
    }

    g.lap_symbol.resize(g.size());
    g.biharm_symbol.resize(g.size());
    g.dealias_mask.resize(g.size());
    const int mcut = N / 3;  // keep |m| <= floor(N/3)
    for (int ix = 0; ix < N; ++ix) {
        const int mx = g.mode(ix);
        for (int iy = 0; iy < N; ++iy) {
            const int my = g.mode(iy);
            const std::size_t id = g.idx(ix, iy);
            const double k2 = g.kx[ix] * g.kx[ix] + g.ky[iy] * g.ky[iy];
            g.lap_symbol[id] = -k2;
            g.biharm_symbol[id] = k2 * k2;
            g.dealias_mask[id] =
                (std::abs(mx) <= mcut && std::abs(my) <= mcut) ? 1 : 0;
        }
    }
    return g;
}

}  // namespace etdms
