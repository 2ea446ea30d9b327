#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <span>
#include <vector>

namespace matterwave {

/// Butcher tableau of the Dormand-Prince 5(4) pair (Dormand & Prince 1980).
/// The 5th-order weights equal the last row of `a` (FSAL); `e` holds the
/// difference between the 5th- and 4th-order weights.
namespace dopri5 {
inline constexpr double c2 = 1.0 / 5.0;
inline constexpr double c3 = 3.0 / 10.0;
inline constexpr double c4 = 4.0 / 5.0;
inline constexpr double c5 = 8.0 / 9.0;

inline constexpr double a21 = 1.0 / 5.0;
inline constexpr double a31 = 3.0 / 40.0;
inline constexpr double a32 = 9.0 / 40.0;
inline constexpr double a41 = 44.0 / 45.0;
inline constexpr double a42 = -56.0 / 15.0;
inline constexpr double a43 = 32.0 / 9.0;
inline constexpr double a51 = 19372.0 / 6561.0;
inline constexpr double a52 = -25360.0 / 2187.0;
inline constexpr double a53 = 64448.0 / 6561.0;
inline constexpr double a54 = -212.0 / 729.0;
inline constexpr double a61 = 9017.0 / 3168.0;
inline constexpr double a62 = -355.0 / 33.0;
inline constexpr double a63 = 46732.0 / 5247.0;
inline constexpr double a64 = 49.0 / 176.0;
inline constexpr double a65 = -5103.0 / 18656.0;
inline constexpr double a71 = 35.0 / 384.0;
inline constexpr double a73 = 500.0 / 1113.0;
inline constexpr double a74 = 125.0 / 192.0;
inline constexpr double a75 = -2187.0 / 6784.0;
inline constexpr double a76 = 11.0 / 84.0;

inline constexpr double e1 = 71.0 / 57600.0;
inline constexpr double e3 = -71.0 / 16695.0;
inline constexpr double e4 = 71.0 / 1920.0;
inline constexpr double e5 = -17253.0 / 339200.0;
inline constexpr double e6 = 22.0 / 525.0;
inline constexpr double e7 = -1.0 / 40.0;
}  // namespace dopri5

struct StepControl {
    double rel_tol;
    double abs_tol;
    double initial_step;
    double max_step;
};

struct IntegrationOutcome {
    enum class Status { Ok, StepUnderflow, NonFinite };
    Status status = Status::Ok;
    double t = 0.0;
    long accepted = 0;
    long rejected = 0;
    long rhs_evaluations = 0;
};

/// Adaptive Dormand-Prince integration of y' = f(t, y) for a complex state
/// from t0 to t1 (t1 > t0), in place. Error norm: RMS over real and imaginary
/// parts of err / (abs_tol + rel_tol max(|y|, |y_new|)). Step size follows the
/// PI controller of Hairer & Wanner's DOPRI5 (beta = 0.04, safety 0.9, step
/// ratio clamped to [0.2, 10]).
template <class Rhs>
IntegrationOutcome integrate_dopri5(const Rhs& f, double t0, double t1, std::span<std::complex<double>> y,
                                    const StepControl& control) {
    using namespace dopri5;
    using C = std::complex<double>;
    const std::size_t n = y.size();
    std::vector<C> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), tmp(n), ynew(n);

    constexpr double safe = 0.9;
    constexpr double beta = 0.04;
    constexpr double expo1 = 0.2 - beta * 0.75;
    constexpr double facc1 = 1.0 / 0.2;
    constexpr double facc2 = 1.0 / 10.0;
    constexpr double uround = std::numeric_limits<double>::epsilon();

    IntegrationOutcome out;
    double t = t0;
    double h = std::min(control.initial_step, control.max_step);
    double facold = 1e-4;
    bool last_rejected = false;

    f(t, std::span<const C>(y), std::span<C>(k1));
    ++out.rhs_evaluations;

    auto stage = [&](auto&& combine) {
        for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * combine(i);
    };

    while (t < t1) {
        if (0.1 * std::abs(h) <= std::abs(t) * uround * 16.0 || h <= 0.0) {
            out.status = IntegrationOutcome::Status::StepUnderflow;
            out.t = t;
            return out;
        }
        bool last = false;
        if (t + 1.01 * h >= t1) {
            h = t1 - t;
            last = true;
        }

        stage([&](std::size_t i) { return a21 * k1[i]; });
        f(t + c2 * h, std::span<const C>(tmp), std::span<C>(k2));
        stage([&](std::size_t i) { return a31 * k1[i] + a32 * k2[i]; });
        f(t + c3 * h, std::span<const C>(tmp), std::span<C>(k3));
        stage([&](std::size_t i) { return a41 * k1[i] + a42 * k2[i] + a43 * k3[i]; });
        f(t + c4 * h, std::span<const C>(tmp), std::span<C>(k4));
        stage([&](std::size_t i) { return a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]; });
        f(t + c5 * h, std::span<const C>(tmp), std::span<C>(k5));
        stage([&](std::size_t i) {
            return a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i];
        });
        f(t + h, std::span<const C>(tmp), std::span<C>(k6));
        for (std::size_t i = 0; i < n; ++i) {
            ynew[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
        }
        const double tnew = last ? t1 : t + h;
        f(tnew, std::span<const C>(ynew), std::span<C>(k7));
        out.rhs_evaluations += 6;

        double err = 0.0;
        bool finite = true;
        for (std::size_t i = 0; i < n; ++i) {
            const C delta = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
            const double sk_re = control.abs_tol + control.rel_tol * std::max(std::abs(y[i].real()), std::abs(ynew[i].real()));
            const double sk_im = control.abs_tol + control.rel_tol * std::max(std::abs(y[i].imag()), std::abs(ynew[i].imag()));
            const double r = delta.real() / sk_re;
            const double m = delta.imag() / sk_im;
            err += r * r + m * m;
            finite = finite && std::isfinite(ynew[i].real()) && std::isfinite(ynew[i].imag());
        }
        if (!finite || !std::isfinite(err)) {
            out.status = IntegrationOutcome::Status::NonFinite;
            out.t = t;
            return out;
        }
        err = std::sqrt(err / static_cast<double>(2 * n));

        const double fac11 = std::pow(err, expo1);
        if (err <= 1.0) {
            double fac = fac11 / std::pow(facold, beta);
            fac = std::max(facc2, std::min(facc1, fac / safe));
            double hnew = h / fac;
            facold = std::max(err, 1e-4);
            ++out.accepted;
            std::copy(ynew.begin(), ynew.end(), y.begin());
            std::swap(k1, k7);
            t = tnew;
            if (std::abs(hnew) > control.max_step) hnew = control.max_step;
            if (last_rejected) hnew = std::min(hnew, h);
            last_rejected = false;
            h = hnew;
        } else {
            h = h / std::min(facc1, fac11 / safe);
            ++out.rejected;
            last_rejected = true;
        }
    }
    out.t = t;
    return out;
}

}  // namespace matterwave
