#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "etdms/field.hpp"
#include "etdms/lagrange.hpp"
#include "etdms/model.hpp"
#include "etdms/phi.hpp"
#include "etdms/stabilization.hpp"

namespace etdms {

// Thrown when a step produces a non-finite (or astronomically large) state.
// The stepper's state is rolled back to the last good step before throwing.
struct BlowUpError : std::runtime_error {
    double t;            // time of the last good state
    std::uint64_t step;  // index of the last good step
    BlowUpError(double t_, std::uint64_t step_);
};

struct StepperOptions {
    int k = 4;             // number of steps (order) of the multistep scheme
    double A = 0.0;        // stabilization coefficient; 0 = unstabilized
    double p = 2.0;        // regularization power: S = (1 + A tau^k |k|^{4p})^{-1}
    bool monitor = false;  // accumulate modified-energy history integrals
};

// Exponential-time-differencing multistep integrator for
//   du/dt = -nu * Lap^2 u + N(u),
// reformulated per mode with S = (1 + A tau^k |k|^{4p})^{-1}, K = nu |k|^4 S:
//   u^{n+1} = e^{-K tau} u^n + sum_i w_i * (S * Nhat(u^{n-i})),
//   w_i = sum_j xi_hat[i][j] * phi_j(K, tau) / tau^j,
// where the Lagrange weights xi_hat extrapolate N over the step. The state is
// kept in Fourier space across steps; nodal fields are materialized only for
// nonlinear evaluations and diagnostics (keeps the error floor at the
// integrator's own roundoff instead of FFT round-trip noise).
//
// Startup: k-1 steps of the one-step fourth-order ETD-RK4 scheme on the
// unstabilized operator fill the history with N-evaluations at
// t0, t0+tau, ..., t0+(k-1) tau.
class Stepper {
  public:
    Stepper(const SpectralGrid& grid, const Fourier& fft,
            const GradientFlowModel& model, double tau, StepperOptions opt);

    void set_state(const Field& u0, double t0);
    void set_state(const Spectrum& u0, double t0);

    // k-1 one-step startup steps; `per_step` (optional) runs after each.
    void bootstrap(const std::function<void(const Stepper&)>& per_step = {});
    void step();                     // one multistep step (needs full history)
    void advance(std::uint64_t n);   // n multistep steps

    // Rebuilds the per-mode tables for a new tau; keeps state and time,
    // clears the history (a bootstrap is required before stepping again).
    void rebuild(double tau);

    double time() const { return t_; }
    std::uint64_t step_count() const { return steps_; }
    double tau() const { return tau_; }
    const StepperOptions& options() const { return opt_; }
    const SpectralGrid& grid() const { return *grid_; }
    bool history_full() const { return hist_.size() >= static_cast<std::size_t>(opt_.k); }

    const Spectrum& state() const { return u_; }
    Field state_field() const;

    double energy() const { return model_->energy(u_); }

    // Modified (stabilized) energy
    //   Etilde(u^n) = E(u^n) + C_L C3 sum_{j=1..k-1} Cbar_j QH_j
    //               + C_L C4 tau^k sum_{j=1..k-1} Cbar_j QV_j,
    // where QH_j/QV_j integrate ||du/dt||^2 in H resp. V^p over the j-th most
    // recent multistep interval, by quad_points-node Gauss-Legendre on the
    // scheme's exact-in-time per-mode reconstruction (see interval_pair).
    // Requires monitor = true and k-1 completed multistep intervals since the
    // last (re)build; throws std::logic_error otherwise.
    double modified_energy(int quad_points = 6) const;
    bool modified_energy_available() const;

    // (QH, QV) of the j-th most recent retained interval (j = 0 newest).
    std::pair<double, double> interval_norms(int j, int quad_points = 6) const;

    // Per-mode table access for property tests.
    const std::vector<double>& S_table() const { return S_; }
    const std::vector<double>& K_table() const { return K_; }
    const std::vector<double>& E_table() const { return E_; }
    const std::vector<std::vector<double>>& w_tables() const { return w_; }

  private:
    void build_tables();
    void push_history();             // evaluates N at (u_, t_) and prepends S*Nhat
    void rk4_step();                 // one ETD-RK4 startup step
    void interval_pair(const std::vector<std::complex<double>>& u_start,
                       std::size_t hist_offset, int qpoints, double& QH,
                       double& QV) const;

    const SpectralGrid* grid_;
    const Fourier* fft_;
    const GradientFlowModel* model_;
    StepperOptions opt_;
    double tau_ = 0.0;
    LagrangeTable lag_;
    StabilizationParams stab_;  // monitor-mode constants (C3, C4, Cbar)

    // Per-mode tables (size N^2).
    std::vector<double> S_;                  // (1 + A tau^k |k|^{4p})^{-1}
    std::vector<double> K_;                  // nu |k|^4 S
    std::vector<double> E_;                  // e^{-K tau}
    std::vector<std::vector<double>> w_;     // k history weights
    std::vector<Rk4Coef> rk4_;               // startup coefficients (z = nu |k|^4)
    std::vector<double> vp_;                 // |k|^{4p} (monitor mode)

    // Monitor quadrature tables on the fixed 6-point theta grid.
    std::vector<double> th_nodes_, th_weights_;          // on [0, tau]
    std::vector<std::vector<double>> Eth_;               // q -> e^{-K theta_q}
    std::vector<std::vector<std::vector<double>>> Wth_;  // i -> q -> mode
    std::vector<std::vector<double>> ellth_;             // i -> q scalars

    // State. Time is t_anchor_ + n_anchor_ * tau_ (no per-step accumulation,
    // so t stays exact to a couple of ulp over arbitrarily long runs).
    Spectrum u_;
    double t_ = 0.0;
    double t_anchor_ = 0.0;
    std::uint64_t n_anchor_ = 0;
    std::uint64_t steps_ = 0;
    bool has_state_ = false;
    std::vector<std::complex<double>> u_start_;              // pre-step state
    std::deque<std::vector<std::complex<double>>> hist_;     // S*Nhat, newest first
    // Interval start states for the k-1 most recent multistep intervals
    // (monitor mode only), newest first; pairs with hist_ entries 1+j..k+j.
    std::deque<std::vector<std::complex<double>>> ustarts_;
    mutable Spectrum scratch_;
};

// One segment of a piecewise-constant step-size schedule.
struct ScheduleSegment {
    double t_end = 0.0;
    double tau = 0.0;
};

// Runs the stepper through the schedule from its current time. Segment end
// times must be strictly increasing and each segment must span an integer
// number of its steps (|t + n tau - t_end| <= tau * 1e-6). On a tau change
// (and on entry with an empty history) the tables are rebuilt and a fresh
// bootstrap is taken, its k-1 steps counted against the segment; a segment
// whose tau matches the previous one continues without re-bootstrap, bitwise
// identical to a single longer segment. `per_step` (optional) runs after
// every completed step.
void run_schedule(Stepper& st, const std::vector<ScheduleSegment>& schedule,
                  const std::function<void(const Stepper&)>& per_step = {});

}  // namespace etdms
