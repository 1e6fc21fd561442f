#include "etdms/field.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <stdexcept>

namespace etdms {

double Field::mean() const {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

struct Fourier::Impl {
    int N = 0;
    fftw_complex* buf = nullptr;
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
};

Fourier::Fourier(const SpectralGrid& g) : grid_(&g), impl_(new Impl) {
    impl_->N = g.N;
    const std::size_t n2 = g.size();
    impl_->buf = fftw_alloc_complex(n2);
    if (!impl_->buf) throw std::bad_alloc();
    // ESTIMATE keeps plan selection deterministic run-to-run.
    impl_->fwd = fftw_plan_dft_2d(g.N, g.N, impl_->buf, impl_->buf,
                                  FFTW_FORWARD, FFTW_ESTIMATE);
    impl_->bwd = fftw_plan_dft_2d(g.N, g.N, impl_->buf, impl_->buf,
                                  FFTW_BACKWARD, FFTW_ESTIMATE);
    if (!impl_->fwd || !impl_->bwd) throw std::runtime_error("FFTW plan creation failed");
}

Fourier::~Fourier() {
    if (impl_) {
        if (impl_->fwd) fftw_destroy_plan(impl_->fwd);
        if (impl_->bwd) fftw_destroy_plan(impl_->bwd);
        if (impl_->buf) fftw_free(impl_->buf);
        delete impl_;
    }
}

void Fourier::forward_into(const double* nodal, std::complex<double>* out) const {
    const std::size_t n2 = grid_->size();
    const double scale = 1.0 / static_cast<double>(n2);
    for (std::size_t i = 0; i < n2; ++i) {
        impl_->buf[i][0] = nodal[i];
        impl_->buf[i][1] = 0.0;
    }
    fftw_execute(impl_->fwd);
    for (std::size_t i = 0; i < n2; ++i) {
        out[i] = {impl_->buf[i][0] * scale, impl_->buf[i][1] * scale};
    }
}

void Fourier::inverse_into(const std::complex<double>* spec, double* out) const {
    const std::size_t n2 = grid_->size();
    std::memcpy(impl_->buf, spec, n2 * sizeof(fftw_complex));
    fftw_execute(impl_->bwd);
    for (std::size_t i = 0; i < n2; ++i) {
        out[i] = impl_->buf[i][0];
    }
}

Spectrum Fourier::forward(const Field& f) const {
    if (f.grid != grid_ || f.v.size() != grid_->size()) {
        throw std::invalid_argument("Fourier::forward: field/grid mismatch");
    }
    Spectrum s(*grid_);
    forward_into(f.v.data(), s.c.data());
    return s;
}

Field Fourier::inverse(const Spectrum& s) const {
    if (s.grid != grid_ || s.c.size() != grid_->size()) {
        throw std::invalid_argument("Fourier::inverse: spectrum/grid mismatch");
    }
    Field f(*grid_);
    inverse_into(s.c.data(), f.v.data());
    return f;
}

namespace {

// Per-mode multiplier |k|^(4*alpha) with the mean-zero zero-mode convention.
double power_multiplier(double b4, double alpha) {
    if (alpha == 0.0) return 1.0;
    if (b4 == 0.0) return 0.0;
    return std::pow(b4, alpha);
}

void require_mean_zero(const Spectrum& s, const char* who) {
    double cmax = 0.0;
    for (const auto& z : s.c) cmax = std::max(cmax, std::abs(z));
    if (std::abs(s.c[0]) > 1e-12 * std::max(1.0, cmax)) {
        throw std::invalid_argument(std::string(who) +
                                    ": negative power requires a mean-zero field");
    }
}

}  // namespace

Spectrum apply_power(const Spectrum& s, double alpha) {
    const SpectralGrid& g = *s.grid;
    if (alpha < 0.0) require_mean_zero(s, "apply_power");
    Spectrum out(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
        out.c[i] = s.c[i] * power_multiplier(g.biharm_symbol[i], alpha);
    }
    return out;
}

double sobolev_norm(const Spectrum& s, double alpha) {
    const SpectralGrid& g = *s.grid;
    if (alpha < 0.0) require_mean_zero(s, "sobolev_norm");
    double acc = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double m = power_multiplier(g.biharm_symbol[i], alpha);
        acc += m * std::norm(s.c[i]);
    }
    return g.L * std::sqrt(acc);
}

double sobolev_norm(const Field& f, double alpha, const Fourier& fft) {
    if (alpha == 0.0) {
        // Nodal RMS times L; avoids a transform.
        double acc = 0.0;
        for (double x : f.v) acc += x * x;
        return f.grid->L * std::sqrt(acc / static_cast<double>(f.v.size()));
    }
    return sobolev_norm(fft.forward(f), alpha);
}

std::pair<Spectrum, Spectrum> gradient(const Spectrum& s) {
    const SpectralGrid& g = *s.grid;
    Spectrum sx(g), sy(g);
    for (int ix = 0; ix < g.N; ++ix) {
        for (int iy = 0; iy < g.N; ++iy) {
            const std::size_t id = g.idx(ix, iy);
            const std::complex<double> iu(-s.c[id].imag(), s.c[id].real());  // i*c
            sx.c[id] = g.kxd[ix] * iu;
            sy.c[id] = g.kyd[iy] * iu;
        }
    }
    return {std::move(sx), std::move(sy)};
}

Spectrum divergence(const Spectrum& sx, const Spectrum& sy) {
    const SpectralGrid& g = *sx.grid;
    if (sy.grid != sx.grid) throw std::invalid_argument("divergence: grid mismatch");
    Spectrum out(g);
    for (int ix = 0; ix < g.N; ++ix) {
        for (int iy = 0; iy < g.N; ++iy) {
            const std::size_t id = g.idx(ix, iy);
            const std::complex<double> ix_c(-sx.c[id].imag(), sx.c[id].real());
            const std::complex<double> iy_c(-sy.c[id].imag(), sy.c[id].real());
            out.c[id] = g.kxd[ix] * ix_c + g.kyd[iy] * iy_c;
        }
    }
    return out;
}

void apply_dealias_mask(Spectrum& s) {
    const SpectralGrid& g = *s.grid;
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (!g.dealias_mask[i]) s.c[i] = {0.0, 0.0};
    }
}

}  // namespace etdms
