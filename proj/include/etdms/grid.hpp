#pragma once

#include <cstddef>
#include <vector>

namespace etdms {

// Periodic N x N collocation grid on [0,L)^2 with standard FFT mode ordering:
// index i maps to integer mode m(i) = i for i < N/2, and i - N for i >= N/2,
// so the Nyquist index N/2 carries mode -N/2. Wavenumber k = (2*pi/L) * m.
//
// First-derivative symbols (kxd/kyd) zero the Nyquist mode: the odd-order
// derivative of a real signal is not representable there, and zeroing keeps
// derivatives of real fields real. Even-order symbols (lap/biharm) keep it.
struct SpectralGrid {
    int N = 0;
    double L = 0.0;
    double dx = 0.0;
    bool dealias = false;

    std::vector<double> kx;   // size N, (2*pi/L)*m(i)
    std::vector<double> ky;   // size N (same values; kept separate for clarity)
    std::vector<double> kxd;  // size N, first-derivative symbol (Nyquist zeroed)
    std::vector<double> kyd;  // size N

    std::vector<double> lap_symbol;     // size N*N, -|k|^2  (row-major: ix*N+iy)
    std::vector<double> biharm_symbol;  // size N*N, |k|^4 = lap_symbol^2
    std::vector<unsigned char> dealias_mask;  // size N*N, 1 = keep (2/3 rule)

    std::size_t size() const { return static_cast<std::size_t>(N) * N; }
    std::size_t idx(int ix, int iy) const { return static_cast<std::size_t>(ix) * N + iy; }
    int mode(int i) const { return i < N / 2 ? i : i - N; }
};

// N must be even and >= 4; L > 0. Symbols are fully populated on return.
SpectralGrid make_grid(int N, double L, bool dealias = false);

}  // namespace etdms
