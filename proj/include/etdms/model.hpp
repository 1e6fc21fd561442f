#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "etdms/field.hpp"

namespace etdms {

// Effective biharmonic coefficient nu derived from the user-facing epsilon.
// The no-slope-selection literature mixes two conventions (the equation is
// written with eps*Lap^2 u while the experiments' forcing/energy carry
// eps^2); both are supported and the choice is recorded in run metadata.
// EpsSquared reproduces the printed forcing sample g(0,0,0) = -8.9936 at
// eps = 0.01; Eps is the convention under which the published convergence
// tables reproduce (see README and the acceptance suite).
enum class NuConvention { EpsSquared, Eps };

// Gradient flow du/dt = -nu * Lap^2 u + N(u) (+ forcing when enabled).
class GradientFlowModel {
  public:
    virtual ~GradientFlowModel() = default;

    virtual std::string name() const = 0;
    virtual double nu() const = 0;
    virtual double beta() const = 0;
    virtual double gamma() const = 0;
    virtual double C_L() const = 0;
    virtual bool has_nonlinearity() const = 0;

    // Writes the normalized spectrum of N(u) (+ forcing) into `out`.
    // The zero mode is zeroed exactly (divergence form; preserves the mean).
    virtual void nonlinear_spectrum(const Spectrum& u, double t,
                                    Spectrum& out) const = 0;

    // Free energy whose gradient flow this model integrates.
    virtual double energy(const Spectrum& u) const = 0;

    // Nodal convenience wrapper around nonlinear_spectrum.
    Field nonlinear(const Field& u, double t, const Fourier& fft) const;
};

// Thin-film epitaxy without slope selection:
//   N(u) = -div( grad u / (1 + |grad u|^2) ),
//   E(u) = sum dx^2 * ( -1/2 ln(1+|grad u|^2) ) + nu/2 * ||Lap u||_H^2,
// with beta = gamma = 1/2, C_L = 1. Pseudo-spectral evaluation; the optional
// 2/3-rule mask of the grid is applied to the nonlinear result when enabled.
// With `manufactured` on, the closed-form forcing g that makes
// u = e^{-t} cos(2x) cos(2y) exact (on an L = 2*pi grid) is added.
class NssModel : public GradientFlowModel {
  public:
    NssModel(const SpectralGrid& grid, const Fourier& fft, double epsilon,
             NuConvention conv = NuConvention::EpsSquared,
             bool manufactured = false);

    std::string name() const override { return "nss"; }
    double nu() const override { return nu_; }
    double beta() const override { return 0.5; }
    double gamma() const override { return 0.5; }
    double C_L() const override { return 1.0; }
    bool has_nonlinearity() const override { return true; }
    void nonlinear_spectrum(const Spectrum& u, double t,
                            Spectrum& out) const override;
    double energy(const Spectrum& u) const override;

    double epsilon() const { return epsilon_; }
    NuConvention convention() const { return conv_; }
    bool manufactured() const { return manufactured_; }

  private:
    const SpectralGrid* grid_;
    const Fourier* fft_;
    double epsilon_;
    NuConvention conv_;
    double nu_;
    bool manufactured_;
};

// Pure linear decay du/dt = -nu * Lap^2 u (N == 0); exactness oracle.
class LinearModel : public GradientFlowModel {
  public:
    LinearModel(const SpectralGrid& grid, double nu);

    std::string name() const override { return "linear"; }
    double nu() const override { return nu_; }
    double beta() const override { return 0.5; }
    double gamma() const override { return 0.5; }
    double C_L() const override { return 1.0; }
    bool has_nonlinearity() const override { return false; }
    void nonlinear_spectrum(const Spectrum&, double, Spectrum& out) const override;
    double energy(const Spectrum& u) const override;

  private:
    const SpectralGrid* grid_;
    double nu_;
};

// Exact manufactured solution u(t) = e^{-t} cos(2x) cos(2y); requires L = 2*pi.
Field manufactured_exact(const SpectralGrid& grid, double t);

// Closed-form forcing for the manufactured solution under coefficient nu.
Field manufactured_forcing(const SpectralGrid& grid, double t, double nu);

// Random initial data policy: i.i.d. uniform on [-amp, amp] per node,
// mean-projected to zero, from a seeded 64-bit PRNG (row-major fill order).
Field white_noise_init(const SpectralGrid& grid, std::uint64_t seed,
                       double amp = 0.05);

// Smooth seeded field: random-amplitude/random-phase cosines over integer
// modes |mx|,|my| <= kmax, rescaled to max-abs = amp, mean-projected.
Field smooth_random_init(const SpectralGrid& grid, std::uint64_t seed,
                         int kmax = 4, double amp = 0.05);

}  // namespace etdms
