#pragma once
#include <array>
#include <cmath>
#include <cstddef>
#include <string>

#include "fhopf/errors.hpp"

namespace fhopf {

struct OdeOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double initial_step = 1e-4;
    double min_step = 1e-15;
    std::size_t max_steps = 2'000'000;
};

// Dormand-Prince 5(4) with embedded error control. Integrates from t0 to t1
// (either direction); the last step is clamped exactly onto t1.
template <std::size_t N, typename Rhs>
void integrate_ode(const Rhs& rhs, double t0, double t1,
                   std::array<double, N>& y, const OdeOptions& opt = {}) {
    if (t0 == t1) return;
    const double dir = (t1 > t0) ? 1.0 : -1.0;

    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5,
                            c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                            a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113,
                            b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                            b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695,
                            e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                            e6 = 22.0 / 525, e7 = -1.0 / 40;

    std::array<double, N> k1, k2, k3, k4, k5, k6, k7, yt, ynew;
    double t = t0;
    double h = dir * std::min(std::abs(opt.initial_step), std::abs(t1 - t0));
    rhs(t, y, k1);

    for (std::size_t step = 0; step < opt.max_steps; ++step) {
        if ((t - t1) * dir >= 0.0) return;
        if ((t + h - t1) * dir > 0.0) h = t1 - t;

        for (std::size_t i = 0; i < N; ++i) yt[i] = y[i] + h * a21 * k1[i];
        rhs(t + c2 * h, yt, k2);
        for (std::size_t i = 0; i < N; ++i)
            yt[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        rhs(t + c3 * h, yt, k3);
        for (std::size_t i = 0; i < N; ++i)
            yt[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        rhs(t + c4 * h, yt, k4);
        for (std::size_t i = 0; i < N; ++i)
            yt[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] +
                                a54 * k4[i]);
        rhs(t + c5 * h, yt, k5);
        for (std::size_t i = 0; i < N; ++i)
            yt[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] +
                                a64 * k4[i] + a65 * k5[i]);
        rhs(t + h, yt, k6);
        for (std::size_t i = 0; i < N; ++i)
            ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] +
                                  b5 * k5[i] + b6 * k6[i]);
        rhs(t + h, ynew, k7);

        double err = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                            e6 * k6[i] + e7 * k7[i]);
            double sc = opt.abs_tol +
                        opt.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
            err = std::max(err, std::abs(e) / sc);
        }

        if (err <= 1.0) {
            t += h;
            y = ynew;
            k1 = k7;  // FSAL
        }
        double factor = (err > 0.0) ? 0.9 * std::pow(err, -0.2) : 5.0;
        factor = std::min(5.0, std::max(0.2, factor));
        h *= factor;
        if (std::abs(h) < opt.min_step)
            throw ConvergenceFailure("ODE step size underflow at t = " +
                                     std::to_string(t));
    }
    throw ConvergenceFailure("ODE step budget exhausted");
}

}  // namespace fhopf
