#include "etdms/diagnostics.hpp"

#include <cmath>
#include <stdexcept>

namespace etdms {

double roughness(const Field& u) {
    if (!u.grid) throw std::invalid_argument("roughness: empty field");
    const double m = u.mean();
    double acc = 0.0;
    for (double x : u.v) {
        const double d = x - m;
        acc += d * d;
    }
    return std::sqrt(acc / static_cast<double>(u.v.size()));
}

double mean_slope(const Field& u, const Fourier& fft) {
    if (!u.grid) throw std::invalid_argument("mean_slope: empty field");
    const SpectralGrid& g = *u.grid;
    const Spectrum uh = fft.forward(u);
    auto [sx, sy] = gradient(uh);
    const Field ux = fft.inverse(sx);
    const Field uy = fft.inverse(sy);
    double acc = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
        acc += ux.v[i] * ux.v[i] + uy.v[i] * uy.v[i];
    return std::sqrt(acc / static_cast<double>(g.size()));
}

double lipschitz_ratio(const GradientFlowModel& model, const Field& u,
                       const Field& v, const Fourier& fft) {
    if (!u.grid || u.grid != v.grid)
        throw std::invalid_argument("lipschitz_ratio: fields on different grids");
    if (u.v == v.v)
        throw std::invalid_argument(
            "lipschitz_ratio: u and v coincide (ratio undefined)");
    const Spectrum uh = fft.forward(u);
    const Spectrum vh = fft.forward(v);
    Spectrum nu_(*u.grid), nv(*u.grid);
    model.nonlinear_spectrum(uh, 0.0, nu_);
    model.nonlinear_spectrum(vh, 0.0, nv);
    Spectrum dn(*u.grid), du(*u.grid);
    for (std::size_t m = 0; m < u.grid->size(); ++m) {
        dn.c[m] = nu_.c[m] - nv.c[m];
        du.c[m] = uh.c[m] - vh.c[m];
    }
    // V^{-beta} requires a mean-free argument; N outputs are mean-free by
    // construction, so only roundoff sits in the zero mode. Clear it.
    dn.c[0] = {0.0, 0.0};
    // With gamma > 0 the zero mode carries no weight, so the denominator
    // measures only the mean-free content of u - v. When that content sits at
    // the rounding floor of the transforms (u - v effectively constant), the
    // ratio is noise rather than a Lipschitz estimate.
    const double denom = sobolev_norm(du, model.gamma());
    const double scale =
        sobolev_norm(uh, model.gamma()) + sobolev_norm(vh, model.gamma());
    if (denom <= 1e-12 * scale)
        throw std::invalid_argument(
            "lipschitz_ratio: u - v has no mean-free content");
    return sobolev_norm(dn, -model.beta()) / denom;
}

namespace {

FitResult fit_core(const std::vector<double>& t, const std::vector<double>& y,
                   double t0, double t1, bool log_y) {
    if (t.size() != y.size())
        throw std::invalid_argument("fit: t and y length mismatch");
    if (!(t0 < t1)) throw std::invalid_argument("fit: degenerate window");
    std::vector<double> xs, zs;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] < t0 || t[i] > t1) continue;
        if (!(t[i] > 0.0))
            throw std::invalid_argument("fit: nonpositive t under log");
        if (log_y && !(y[i] > 0.0))
            throw std::invalid_argument("fit: nonpositive value under log");
        xs.push_back(std::log(t[i]));
        zs.push_back(log_y ? std::log(y[i]) : y[i]);
    }
    if (xs.size() < 10)
        throw std::invalid_argument("fit: fewer than 10 samples in the window");

    const double n = static_cast<double>(xs.size());
    double sx = 0.0, sz = 0.0, sxx = 0.0, sxz = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sz += zs[i];
        sxx += xs[i] * xs[i];
        sxz += xs[i] * zs[i];
    }
    // det / (n * sxx) is the relative variance of the regressor; near zero
    // (all t effectively equal) the slope is pure cancellation noise.
    const double det = n * sxx - sx * sx;
    if (!(det > 1e-12 * n * sxx))
        throw std::invalid_argument("fit: singular design (all t equal)");
    const double slope = (n * sxz - sx * sz) / det;
    const double intercept = (sz - slope * sx) / n;

    double ss = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = zs[i] - (slope * xs[i] + intercept);
        ss += r * r;
    }
    FitResult out;
    out.t0 = t0;
    out.t1 = t1;
    out.n = static_cast<int>(xs.size());
    out.residual = std::sqrt(ss / n);
    if (log_y) {
        out.a = std::exp(intercept);
        out.b = slope;
    } else {
        out.a = slope;
        out.b = intercept;
    }
    return out;
}

}  // namespace

FitResult fit_semilog(const std::vector<double>& t, const std::vector<double>& y,
                      double t0, double t1) {
    return fit_core(t, y, t0, t1, false);
}

FitResult fit_loglog(const std::vector<double>& t, const std::vector<double>& y,
                     double t0, double t1) {
    return fit_core(t, y, t0, t1, true);
}

}  // namespace etdms
