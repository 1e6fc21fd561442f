#include "etdms/stepper.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "etdms/quadrature.hpp"

namespace etdms {

namespace {

bool state_ok(const std::vector<std::complex<double>>& c) {
    for (const auto& z : c) {
        const double re = z.real(), im = z.imag();
        if (!std::isfinite(re) || !std::isfinite(im)) return false;
        if (std::abs(re) > 1e100 || std::abs(im) > 1e100) return false;
    }
    return true;
}

}  // namespace

BlowUpError::BlowUpError(double t_, std::uint64_t step_)
    : std::runtime_error("solution blew up after step " + std::to_string(step_) +
                         " (last good state at t = " + std::to_string(t_) + ")"),
      t(t_),
      step(step_) {}

Stepper::Stepper(const SpectralGrid& grid, const Fourier& fft,
                 const GradientFlowModel& model, double tau, StepperOptions opt)
    : grid_(&grid), fft_(&fft), model_(&model), opt_(opt), tau_(tau) {
    if (&fft.grid() != &grid)
        throw std::invalid_argument("Stepper: fft is bound to a different grid");
    if (!(tau > 0.0)) throw std::invalid_argument("Stepper: tau must be > 0");
    if (opt_.k < 1 || opt_.k > 8)
        throw std::invalid_argument("Stepper: k must be in [1, 8]");
    if (opt_.A < 0.0) throw std::invalid_argument("Stepper: A must be >= 0");
    if (!(opt_.p > 0.0)) throw std::invalid_argument("Stepper: p must be > 0");
    lag_ = lagrange_table(opt_.k);
    if (opt_.monitor) {
        stab_ = stabilization_params(opt_.k, model.beta(), model.gamma(),
                                     model.C_L());
    }
    u_ = Spectrum(grid);
    scratch_ = Spectrum(grid);
    build_tables();
}

void Stepper::build_tables() {
    const std::size_t n2 = grid_->size();
    const int k = opt_.k;
    const double Atk = opt_.A * std::pow(tau_, k);

    S_.resize(n2);
    K_.resize(n2);
    E_.resize(n2);
    w_.assign(k, std::vector<double>(n2, 0.0));
    rk4_.resize(n2);
    vp_.resize(n2);

    std::vector<double> invtau_pow(k);  // tau^{-j}
    invtau_pow[0] = 1.0;
    for (int j = 1; j < k; ++j) invtau_pow[j] = invtau_pow[j - 1] / tau_;

    std::vector<double> phi(k);
    for (std::size_t m = 0; m < n2; ++m) {
        const double b4 = grid_->biharm_symbol[m];
        vp_[m] = (b4 == 0.0) ? 0.0 : std::pow(b4, opt_.p);
        S_[m] = 1.0 / (1.0 + Atk * vp_[m]);
        K_[m] = model_->nu() * b4 * S_[m];
        E_[m] = std::exp(-K_[m] * tau_);
        phi_values(K_[m], tau_, k - 1, phi.data());
        for (int i = 0; i < k; ++i) {
            double acc = 0.0;
            for (int j = 0; j < k; ++j)
                acc += lag_.xi_hat[i][j] * phi[j] * invtau_pow[j];
            w_[i][m] = acc;
        }
        rk4_[m] = etdrk4_coeffs(model_->nu() * b4, tau_);
    }

    if (opt_.monitor) {
        const int Q = 6;
        const GaussLegendre gl = gauss_legendre(Q);
        th_nodes_.resize(Q);
        th_weights_.resize(Q);
        Eth_.assign(Q, std::vector<double>(n2, 0.0));
        Wth_.assign(k, std::vector<std::vector<double>>(
                           Q, std::vector<double>(n2, 0.0)));
        ellth_.assign(k, std::vector<double>(Q, 0.0));
        for (int q = 0; q < Q; ++q) {
            th_nodes_[q] = 0.5 * tau_ * (1.0 + gl.x[q]);
            th_weights_[q] = 0.5 * tau_ * gl.w[q];
            for (int i = 0; i < k; ++i)
                ellth_[i][q] = lagrange_eval(lag_, i, th_nodes_[q] / tau_);
        }
        for (std::size_t m = 0; m < n2; ++m) {
            for (int q = 0; q < Q; ++q) {
                phi_values(K_[m], th_nodes_[q], k - 1, phi.data());
                Eth_[q][m] = std::exp(-K_[m] * th_nodes_[q]);
                for (int i = 0; i < k; ++i) {
                    double acc = 0.0;
                    for (int j = 0; j < k; ++j)
                        acc += lag_.xi_hat[i][j] * phi[j] * invtau_pow[j];
                    Wth_[i][q][m] = acc;
                }
            }
        }
    } else {
        th_nodes_.clear();
        th_weights_.clear();
        Eth_.clear();
        Wth_.clear();
        ellth_.clear();
    }
}

void Stepper::set_state(const Field& u0, double t0) {
    if (u0.grid != grid_)
        throw std::invalid_argument("Stepper::set_state: field grid mismatch");
    set_state(fft_->forward(u0), t0);
}

void Stepper::set_state(const Spectrum& u0, double t0) {
    if (u0.grid != grid_)
        throw std::invalid_argument("Stepper::set_state: spectrum grid mismatch");
    u_.c = u0.c;
    t_ = t0;
    t_anchor_ = t0;
    n_anchor_ = 0;
    steps_ = 0;
    has_state_ = true;
    hist_.clear();
    ustarts_.clear();
    u_start_ = u_.c;
    push_history();
}

void Stepper::push_history() {
    model_->nonlinear_spectrum(u_, t_, scratch_);
    std::vector<std::complex<double>> e(grid_->size());
    for (std::size_t m = 0; m < e.size(); ++m) e[m] = S_[m] * scratch_.c[m];
    hist_.push_front(std::move(e));
    // Monitor mode keeps enough history to reconstruct the k-1 most recent
    // intervals (their steps used entries up to 2k-1 deep).
    const std::size_t cap = opt_.monitor
                                ? static_cast<std::size_t>(2 * opt_.k - 1)
                                : static_cast<std::size_t>(opt_.k);
    while (hist_.size() > cap) hist_.pop_back();
}

void Stepper::rebuild(double tau) {
    if (!(tau > 0.0)) throw std::invalid_argument("Stepper::rebuild: tau must be > 0");
    tau_ = tau;
    build_tables();
    hist_.clear();
    ustarts_.clear();
    t_anchor_ = t_;
    n_anchor_ = 0;
    if (has_state_) {
        u_start_ = u_.c;
        push_history();
    }
}

void Stepper::rk4_step() {
    const std::size_t n2 = grid_->size();
    u_start_ = u_.c;

    Spectrum a(*grid_), stage(*grid_);
    std::vector<std::complex<double>> n1(n2), na(n2), nb(n2);

    model_->nonlinear_spectrum(u_, t_, scratch_);
    n1 = scratch_.c;

    for (std::size_t m = 0; m < n2; ++m)
        a.c[m] = rk4_[m].E2 * u_.c[m] + rk4_[m].Q * n1[m];
    model_->nonlinear_spectrum(a, t_ + 0.5 * tau_, scratch_);
    na = scratch_.c;

    for (std::size_t m = 0; m < n2; ++m)
        stage.c[m] = rk4_[m].E2 * u_.c[m] + rk4_[m].Q * na[m];
    model_->nonlinear_spectrum(stage, t_ + 0.5 * tau_, scratch_);
    nb = scratch_.c;

    for (std::size_t m = 0; m < n2; ++m)
        stage.c[m] = rk4_[m].E2 * a.c[m] + rk4_[m].Q * (2.0 * nb[m] - n1[m]);
    model_->nonlinear_spectrum(stage, t_ + tau_, scratch_);

    for (std::size_t m = 0; m < n2; ++m) {
        u_.c[m] = rk4_[m].E * u_.c[m] + rk4_[m].f1 * n1[m] +
                  rk4_[m].f2x2 * (na[m] + nb[m]) + rk4_[m].f3 * scratch_.c[m];
    }
    if (!state_ok(u_.c)) {
        u_.c = u_start_;
        throw BlowUpError(t_, steps_);
    }
    ++n_anchor_;
    t_ = t_anchor_ + static_cast<double>(n_anchor_) * tau_;
    ++steps_;
    push_history();
}

void Stepper::bootstrap(const std::function<void(const Stepper&)>& per_step) {
    if (!has_state_) throw std::logic_error("Stepper::bootstrap: no state set");
    for (int s = 0; s < opt_.k - 1; ++s) {
        rk4_step();
        if (per_step) per_step(*this);
    }
}

void Stepper::step() {
    const int k = opt_.k;
    if (!has_state_) throw std::logic_error("Stepper::step: no state set");
    if (hist_.size() < static_cast<std::size_t>(k))
        throw std::logic_error("Stepper::step: history not full; bootstrap first");

    const std::size_t n2 = grid_->size();
    u_start_ = u_.c;

    const std::complex<double>* h[8];
    for (int i = 0; i < k; ++i) h[i] = hist_[i].data();
    for (std::size_t m = 0; m < n2; ++m) {
        std::complex<double> acc = E_[m] * u_.c[m];
        for (int i = 0; i < k; ++i) acc += w_[i][m] * h[i][m];
        u_.c[m] = acc;
    }
    if (!state_ok(u_.c)) {
        u_.c = u_start_;
        throw BlowUpError(t_, steps_);
    }

    if (opt_.monitor && k >= 2) {
        ustarts_.push_front(u_start_);
        while (ustarts_.size() > static_cast<std::size_t>(k) - 1)
            ustarts_.pop_back();
    }

    ++n_anchor_;
    t_ = t_anchor_ + static_cast<double>(n_anchor_) * tau_;
    ++steps_;
    push_history();
}

void Stepper::advance(std::uint64_t n) {
    for (std::uint64_t i = 0; i < n; ++i) step();
}

Field Stepper::state_field() const { return fft_->inverse(u_); }

// Integrates ||du/dt||^2 in H and V^p over one interval [t_m, t_m + tau]
// using the scheme's exact-in-time reconstruction
//   u(theta) = e^{-K theta} u_m + sum_i [sum_j xi_hat[i][j] phi_j(K,theta)/tau^j] Ntilde_i,
//   du/dtheta = -K u(theta) + sum_i l_i(theta/tau) Ntilde_i,
// where Ntilde_i are the history entries used for that step, found at
// hist_[hist_offset + i].
void Stepper::interval_pair(const std::vector<std::complex<double>>& u_start,
                            std::size_t hist_offset, int qpoints, double& QH,
                            double& QV) const {
    const int k = opt_.k;
    const std::size_t n2 = grid_->size();
    if (hist_.size() < hist_offset + static_cast<std::size_t>(k))
        throw std::logic_error("interval_pair: insufficient history");
    const std::complex<double>* h[8];
    for (int i = 0; i < k; ++i) h[i] = hist_[hist_offset + i].data();

    QH = 0.0;
    QV = 0.0;
    const double L2 = grid_->L * grid_->L;

    if (qpoints == 6 && !Eth_.empty()) {
        // Fast path on the precomputed theta grid.
        for (int q = 0; q < 6; ++q) {
            double sH = 0.0, sV = 0.0;
            const double* Eq = Eth_[q].data();
            const double* Wq[8];
            double lq[8];
            for (int i = 0; i < k; ++i) {
                Wq[i] = Wth_[i][q].data();
                lq[i] = ellth_[i][q];
            }
            for (std::size_t m = 0; m < n2; ++m) {
                std::complex<double> uq = Eq[m] * u_start[m];
                for (int i = 0; i < k; ++i) uq += Wq[i][m] * h[i][m];
                std::complex<double> du = -K_[m] * uq;
                for (int i = 0; i < k; ++i) du += lq[i] * h[i][m];
                const double a2 = std::norm(du);
                sH += a2;
                sV += vp_[m] * a2;
            }
            QH += th_weights_[q] * sH;
            QV += th_weights_[q] * sV;
        }
        QH *= L2;
        QV *= L2;
        return;
    }

    // Generic path (quadrature refinement checks): phi per mode per node.
    const GaussLegendre gl = gauss_legendre(qpoints);
    std::vector<double> invtau_pow(k);
    invtau_pow[0] = 1.0;
    for (int j = 1; j < k; ++j) invtau_pow[j] = invtau_pow[j - 1] / tau_;
    std::vector<double> phi(k), ell(k);
    for (int q = 0; q < qpoints; ++q) {
        const double theta = 0.5 * tau_ * (1.0 + gl.x[q]);
        const double wq = 0.5 * tau_ * gl.w[q];
        for (int i = 0; i < k; ++i) ell[i] = lagrange_eval(lag_, i, theta / tau_);
        double sH = 0.0, sV = 0.0;
        for (std::size_t m = 0; m < n2; ++m) {
            phi_values(K_[m], theta, k - 1, phi.data());
            std::complex<double> uq =
                std::exp(-K_[m] * theta) * u_start[m];
            for (int i = 0; i < k; ++i) {
                double W = 0.0;
                for (int j = 0; j < k; ++j)
                    W += lag_.xi_hat[i][j] * phi[j] * invtau_pow[j];
                uq += W * h[i][m];
            }
            std::complex<double> du = -K_[m] * uq;
            for (int i = 0; i < k; ++i) du += ell[i] * h[i][m];
            const double a2 = std::norm(du);
            sH += a2;
            sV += vp_[m] * a2;
        }
        QH += wq * sH;
        QV += wq * sV;
    }
    QH *= L2;
    QV *= L2;
}

bool Stepper::modified_energy_available() const {
    return opt_.monitor &&
           ustarts_.size() >= static_cast<std::size_t>(opt_.k) - 1 &&
           hist_.size() >= static_cast<std::size_t>(2 * opt_.k - 1);
}

std::pair<double, double> Stepper::interval_norms(int j, int quad_points) const {
    if (!opt_.monitor)
        throw std::logic_error("interval_norms: stepper built without monitor");
    if (j < 0 || static_cast<std::size_t>(j) >= ustarts_.size() ||
        hist_.size() < static_cast<std::size_t>(opt_.k + j + 1))
        throw std::logic_error("interval_norms: interval not retained");
    if (quad_points < 1)
        throw std::invalid_argument("interval_norms: quad_points must be >= 1");
    double QH = 0.0, QV = 0.0;
    interval_pair(ustarts_[j], static_cast<std::size_t>(j) + 1, quad_points, QH,
                  QV);
    return {QH, QV};
}

double Stepper::modified_energy(int quad_points) const {
    if (!opt_.monitor)
        throw std::logic_error("modified_energy: stepper built without monitor");
    if (!modified_energy_available())
        throw std::logic_error(
            "modified_energy: requires k-1 completed multistep intervals");
    double acc = 0.0;
    const double tauk = std::pow(tau_, opt_.k);
    for (int j = 1; j < opt_.k; ++j) {
        const auto [QH, QV] = interval_norms(j - 1, quad_points);
        acc += stab_.Cbar[j] * (stab_.C_L * stab_.C3 * QH +
                                stab_.C_L * stab_.C4 * tauk * QV);
    }
    return model_->energy(u_) + acc;
}

void run_schedule(Stepper& st, const std::vector<ScheduleSegment>& schedule,
                  const std::function<void(const Stepper&)>& per_step) {
    if (schedule.empty())
        throw std::invalid_argument("run_schedule: empty schedule");
    const int k = st.options().k;
    double prev_end = st.time();
    for (std::size_t s = 0; s < schedule.size(); ++s) {
        const ScheduleSegment& seg = schedule[s];
        if (!(seg.tau > 0.0))
            throw std::invalid_argument("run_schedule: segment tau must be > 0");
        if (!(seg.t_end > prev_end))
            throw std::invalid_argument(
                "run_schedule: segment end times must be strictly increasing");
        prev_end = seg.t_end;

        const bool tau_change = seg.tau != st.tau();
        if (tau_change) st.rebuild(seg.tau);

        const double span = seg.t_end - st.time();
        const long long n = std::llround(span / seg.tau);
        if (n < 1 || std::abs(st.time() + static_cast<double>(n) * seg.tau -
                              seg.t_end) > seg.tau * 1e-6) {
            char buf[160];
            std::snprintf(buf, sizeof(buf),
                          "run_schedule: segment %zu does not span an integer "
                          "number of steps (t_end=%.17g tau=%.17g)",
                          s, seg.t_end, seg.tau);
            throw std::invalid_argument(buf);
        }

        long long remaining = n;
        if (!st.history_full()) {
            if (n < k - 1) {
                throw std::invalid_argument(
                    "run_schedule: segment too short for the startup steps");
            }
            st.bootstrap(per_step);
            remaining -= k - 1;
        }
        for (long long i = 0; i < remaining; ++i) {
            st.step();
            if (per_step) per_step(st);
        }
    }
}

}  // namespace etdms
