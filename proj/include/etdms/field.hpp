#pragma once

#include <complex>
#include <utility>
#include <vector>

#include "etdms/grid.hpp"

namespace etdms {

// Real nodal samples, row-major (ix*N+iy), on a shared grid.
struct Field {
    const SpectralGrid* grid = nullptr;
    std::vector<double> v;

    Field() = default;
    explicit Field(const SpectralGrid& g) : grid(&g), v(g.size(), 0.0) {}

    double mean() const;
};

// Normalized Fourier coefficients: c[0] equals the mean of the nodal values.
struct Spectrum {
    const SpectralGrid* grid = nullptr;
    std::vector<std::complex<double>> c;

    Spectrum() = default;
    explicit Spectrum(const SpectralGrid& g) : grid(&g), c(g.size(), {0.0, 0.0}) {}
};

// FFT engine bound to one grid size (FFTW, deterministic ESTIMATE plans).
// Not safe for concurrent use; the library is single-threaded by design.
class Fourier {
  public:
    explicit Fourier(const SpectralGrid& g);
    ~Fourier();
    Fourier(const Fourier&) = delete;
    Fourier& operator=(const Fourier&) = delete;

    Spectrum forward(const Field& f) const;
    Field inverse(const Spectrum& s) const;

    // Raw-buffer variants used on hot paths (out must hold N*N entries).
    void forward_into(const double* nodal, std::complex<double>* out) const;
    void inverse_into(const std::complex<double>* spec, double* out) const;

    const SpectralGrid& grid() const { return *grid_; }

  private:
    const SpectralGrid* grid_;
    struct Impl;
    Impl* impl_;
};

// ---- Spectral operators ---------------------------------------------------

// Applies the operator power with per-mode multiplier |k|^(4*alpha).
// Zero mode: 1 for alpha == 0 (identity), 0 for alpha > 0, and for alpha < 0
// the input must be mean-zero (throws std::invalid_argument otherwise).
Spectrum apply_power(const Spectrum& s, double alpha);

// ||f||_{V^alpha} = || L^{alpha/2} f ||_H with per-mode multiplier |k|^(2*alpha)
// on the coefficients; alpha = 0 is the discrete L2 norm (nodal RMS times L).
double sobolev_norm(const Spectrum& s, double alpha);
double sobolev_norm(const Field& f, double alpha, const Fourier& fft);

// Spectral differentiation (first-derivative symbols, Nyquist zeroed).
std::pair<Spectrum, Spectrum> gradient(const Spectrum& s);
Spectrum divergence(const Spectrum& sx, const Spectrum& sy);

// Zeroes all modes outside the 2/3-rule mask (no-op copy if mask keeps all).
void apply_dealias_mask(Spectrum& s);

}  // namespace etdms
