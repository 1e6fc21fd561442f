#include "etdms/model.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace etdms {

Field GradientFlowModel::nonlinear(const Field& u, double t,
                                   const Fourier& fft) const {
    Spectrum uh = fft.forward(u);
    Spectrum nh(*u.grid);
    nonlinear_spectrum(uh, t, nh);
    return fft.inverse(nh);
}

NssModel::NssModel(const SpectralGrid& grid, const Fourier& fft, double epsilon,
                   NuConvention conv, bool manufactured)
    : grid_(&grid),
      fft_(&fft),
      epsilon_(epsilon),
      conv_(conv),
      nu_(conv == NuConvention::EpsSquared ? epsilon * epsilon : epsilon),
      manufactured_(manufactured) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("NssModel: epsilon must be > 0");
    if (manufactured_ && std::abs(grid.L - 2.0 * M_PI) > 1e-12) {
        throw std::invalid_argument(
            "NssModel: manufactured forcing requires an L = 2*pi grid");
    }
}

void NssModel::nonlinear_spectrum(const Spectrum& u, double t,
                                  Spectrum& out) const {
    const SpectralGrid& g = *grid_;
    const std::size_t n2 = g.size();
    if (out.grid != &g) out = Spectrum(g);

    // grad u in spectral space, then to nodes
    static thread_local std::vector<std::complex<double>> cx, cy;
    static thread_local std::vector<double> ux, uy;
    cx.resize(n2);
    cy.resize(n2);
    ux.resize(n2);
    uy.resize(n2);
    for (int ix = 0; ix < g.N; ++ix) {
        for (int iy = 0; iy < g.N; ++iy) {
            const std::size_t id = g.idx(ix, iy);
            const std::complex<double> iu(-u.c[id].imag(), u.c[id].real());
            cx[id] = g.kxd[ix] * iu;
            cy[id] = g.kyd[iy] * iu;
        }
    }
    fft_->inverse_into(cx.data(), ux.data());
    fft_->inverse_into(cy.data(), uy.data());

    // pointwise flux grad u / (1 + |grad u|^2), with forcing folded in nodally
    for (std::size_t i = 0; i < n2; ++i) {
        const double w = 1.0 + ux[i] * ux[i] + uy[i] * uy[i];
        ux[i] /= w;
        uy[i] /= w;
    }
    fft_->forward_into(ux.data(), cx.data());
    fft_->forward_into(uy.data(), cy.data());

    for (int ix = 0; ix < g.N; ++ix) {
        for (int iy = 0; iy < g.N; ++iy) {
            const std::size_t id = g.idx(ix, iy);
            const std::complex<double> ixc(-cx[id].imag(), cx[id].real());
            const std::complex<double> iyc(-cy[id].imag(), cy[id].real());
            out.c[id] = -(g.kxd[ix] * ixc + g.kyd[iy] * iyc);
        }
    }

    if (manufactured_) {
        static thread_local std::vector<std::complex<double>> gH;
        gH.resize(n2);
        const Field gfield = manufactured_forcing(g, t, nu_);
        fft_->forward_into(gfield.v.data(), gH.data());
        for (std::size_t i = 0; i < n2; ++i) out.c[i] += gH[i];
    }

    out.c[0] = {0.0, 0.0};
    if (g.dealias) apply_dealias_mask(out);
}

double NssModel::energy(const Spectrum& u) const {
    const SpectralGrid& g = *grid_;
    const std::size_t n2 = g.size();
    static thread_local std::vector<std::complex<double>> cx, cy;
    static thread_local std::vector<double> ux, uy;
    cx.resize(n2);
    cy.resize(n2);
    ux.resize(n2);
    uy.resize(n2);
    for (int ix = 0; ix < g.N; ++ix) {
        for (int iy = 0; iy < g.N; ++iy) {
            const std::size_t id = g.idx(ix, iy);
            const std::complex<double> iu(-u.c[id].imag(), u.c[id].real());
            cx[id] = g.kxd[ix] * iu;
            cy[id] = g.kyd[iy] * iu;
        }
    }
    fft_->inverse_into(cx.data(), ux.data());
    fft_->inverse_into(cy.data(), uy.data());

    double logpart = 0.0;
    for (std::size_t i = 0; i < n2; ++i) {
        logpart += -0.5 * std::log1p(ux[i] * ux[i] + uy[i] * uy[i]);
    }
    logpart *= g.dx * g.dx;

    double quad = 0.0;
    for (std::size_t i = 0; i < n2; ++i) {
        quad += g.biharm_symbol[i] * std::norm(u.c[i]);
    }
    quad *= 0.5 * nu_ * g.L * g.L;
    return logpart + quad;
}

LinearModel::LinearModel(const SpectralGrid& grid, double nu)
    : grid_(&grid), nu_(nu) {
    if (nu < 0.0) throw std::invalid_argument("LinearModel: nu must be >= 0");
}

void LinearModel::nonlinear_spectrum(const Spectrum&, double,
                                     Spectrum& out) const {
    if (out.grid != grid_) out = Spectrum(*grid_);
    for (auto& z : out.c) z = {0.0, 0.0};
}

double LinearModel::energy(const Spectrum& u) const {
    const SpectralGrid& g = *grid_;
    double quad = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        quad += g.biharm_symbol[i] * std::norm(u.c[i]);
    }
    return 0.5 * nu_ * g.L * g.L * quad;
}

Field manufactured_exact(const SpectralGrid& grid, double t) {
    if (std::abs(grid.L - 2.0 * M_PI) > 1e-12) {
        throw std::invalid_argument("manufactured_exact: requires L = 2*pi");
    }
    Field f(grid);
    const double a = std::exp(-t);
    for (int ix = 0; ix < grid.N; ++ix) {
        const double x = ix * grid.dx;
        const double c2x = std::cos(2.0 * x);
        for (int iy = 0; iy < grid.N; ++iy) {
            const double y = iy * grid.dx;
            f.v[grid.idx(ix, iy)] = a * c2x * std::cos(2.0 * y);
        }
    }
    return f;
}

Field manufactured_forcing(const SpectralGrid& grid, double t, double nu) {
    if (std::abs(grid.L - 2.0 * M_PI) > 1e-12) {
        throw std::invalid_argument("manufactured_forcing: requires L = 2*pi");
    }
    Field f(grid);
    const double e1 = std::exp(-t);
    const double e2 = std::exp(-2.0 * t);
    const double lin = -1.0 + 64.0 * nu;
    for (int ix = 0; ix < grid.N; ++ix) {
        const double x = ix * grid.dx;
        const double c2x = std::cos(2.0 * x);
        const double c4x = std::cos(4.0 * x);
        for (int iy = 0; iy < grid.N; ++iy) {
            const double y = iy * grid.dx;
            const double c2y = std::cos(2.0 * y);
            const double c4y = std::cos(4.0 * y);
            const double u = e1 * c2x * c2y;
            const double D = 1.0 + 2.0 * e2 * (1.0 - c4x * c4y);
            const double P = c4x + c4y - 2.0 * c4x * c4y;
            f.v[grid.idx(ix, iy)] =
                lin * u - 8.0 * u / D + 16.0 * e2 * u * P / (D * D);
        }
    }
    return f;
}

Field white_noise_init(const SpectralGrid& grid, std::uint64_t seed, double amp) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-amp, amp);
    Field f(grid);
    for (auto& x : f.v) x = dist(rng);
    const double m = f.mean();
    for (auto& x : f.v) x -= m;
    return f;
}

Field smooth_random_init(const SpectralGrid& grid, std::uint64_t seed, int kmax,
                         double amp) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ampdist(-1.0, 1.0);
    std::uniform_real_distribution<double> phdist(0.0, 2.0 * M_PI);
    Field f(grid);
    const double k0 = 2.0 * M_PI / grid.L;
    for (int mx = -kmax; mx <= kmax; ++mx) {
        for (int my = -kmax; my <= kmax; ++my) {
            if (mx == 0 && my == 0) continue;
            const double a = ampdist(rng);
            const double ph = phdist(rng);
            for (int ix = 0; ix < grid.N; ++ix) {
                const double xk = mx * k0 * (ix * grid.dx);
                for (int iy = 0; iy < grid.N; ++iy) {
                    const double yk = my * k0 * (iy * grid.dx);
                    f.v[grid.idx(ix, iy)] += a * std::cos(xk + yk + ph);
                }
            }
        }
    }
    double mx_abs = 0.0;
    for (double x : f.v) mx_abs = std::max(mx_abs, std::abs(x));
    if (mx_abs > 0.0) {
        const double s = amp / mx_abs;
        for (auto& x : f.v) x *= s;
    }
    const double m = f.mean();
    for (auto& x : f.v) x -= m;
    return f;
}

}  // namespace etdms
