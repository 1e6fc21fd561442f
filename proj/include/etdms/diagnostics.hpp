#pragma once

#include <vector>

#include "etdms/field.hpp"
#include "etdms/model.hpp"

namespace etdms {

// Average surface roughness h = sqrt( dx^2/L^2 * sum |u - mean(u)|^2 )
// (the RMS of the mean-free field).
double roughness(const Field& u);

// Average slope m = sqrt( dx^2/L^2 * sum |grad u|^2 ) with the spectral
// gradient.
double mean_slope(const Field& u, const Fourier& fft);

// Discrete Lipschitz-continuity probe:
//   ||N(u) - N(v)||_{V^{-beta}} / ||u - v||_{V^{gamma}}
// with (beta, gamma) taken from the model. Throws std::invalid_argument when
// u and v coincide (the ratio is 0/0) or the denominator vanishes.
double lipschitz_ratio(const GradientFlowModel& model, const Field& u,
                       const Field& v, const Fourier& fft);

struct FitResult {
    double a = 0.0;         // semilog: slope of ln t; loglog: amplitude
    double b = 0.0;         // semilog: intercept;     loglog: exponent
    double t0 = 0.0;        // fit window
    double t1 = 0.0;
    int n = 0;              // samples used
    double residual = 0.0;  // RMS misfit in the regression variable
};

// Least-squares fit of y = a ln(t) + b over samples with t in [t0, t1].
// Requires t0 < t1, at least 10 samples inside the window, and positive t.
FitResult fit_semilog(const std::vector<double>& t, const std::vector<double>& y,
                      double t0, double t1);

// Least-squares fit of y = a * t^b (OLS on ln y vs ln t) over [t0, t1].
// Additionally requires positive y values inside the window.
FitResult fit_loglog(const std::vector<double>& t, const std::vector<double>& y,
                     double t0, double t1);

}  // namespace etdms
