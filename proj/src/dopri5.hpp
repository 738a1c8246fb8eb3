// Internal Dormand-Prince 5(4) stepper with the standard quartic dense
// output. Autonomous systems only; h may be negative.
#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

namespace afflab::detail {

template <int N>
struct DenseStep {
    double t0 = 0, h = 0;
    std::array<double, N> r1{}, r2{}, r3{}, r4{}, r5{};

    std::array<double, N> eval(double t) const {
        double th = (t - t0) / h;
        std::array<double, N> out;
        for (int i = 0; i < N; ++i) {
            double om = 1.0 - th;
            out[i] = r1[i] + th * (r2[i] + om * (r3[i] + th * (r4[i] + om * r5[i])));
        }
        return out;
    }
    // d/dt of the interpolant.
    std::array<double, N> eval_derivative(double t) const {
        double th = (t - t0) / h;
        std::array<double, N> out;
        for (int i = 0; i < N; ++i) {
            double d = r2[i] + (1 - 2 * th) * r3[i] + (2 * th - 3 * th * th) * r4[i] +
                       (2 * th - 6 * th * th + 4 * th * th * th) * r5[i];
            out[i] = d / h;
        }
        return out;
    }
};

enum class StepOutcome { Done, UMax, StepCollapse, NonFinite, MaxSteps };

template <int N>
struct Dopri5Result {
    std::vector<DenseStep<N>> steps;
    std::vector<double> ts;                      // accepted step endpoints
    std::vector<std::array<double, N>> states;   // states at ts
    StepOutcome outcome = StepOutcome::Done;
};

// Integrates y' = f(y) from t=0 over the signed span. velocity_norm (may be
// null) feeds the |u| > u_max escape check and the h-collapse policy.
template <int N, class F>
Dopri5Result<N> dopri5(F f, std::array<double, N> y0, double t_span,
                       double rel_tol, double abs_tol, double u_max,
                       double h_min, std::size_t max_steps,
                       double (*velocity_norm)(const std::array<double, N>&)) {
    static const double a21 = 1.0 / 5;
    static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                        a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                        a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                        a65 = -5103.0 / 18656;
    static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                        b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static const double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                        e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
    static const double d1 = -12715105075.0 / 11282082432.0,
                        d3 = 87487479700.0 / 32700410799.0,
                        d4 = -10690763975.0 / 1880347072.0,
                        d5 = 701980252875.0 / 199316789632.0,
                        d6 = -1453857185.0 / 822651844.0,
                        d7 = 69997945.0 / 29380423.0;

    Dopri5Result<N> res;
    const double dir = t_span >= 0 ? 1.0 : -1.0;
    const double t_end = t_span;
    double t = 0.0;
    std::array<double, N> y = y0;
    res.ts.push_back(t);
    res.states.push_back(y);

    auto finite = [](const std::array<double, N>& v) {
        for (double x : v)
            if (!std::isfinite(x)) return false;
        return true;
    };

    std::array<double, N> k1 = f(y);
    if (!finite(k1)) {
        res.outcome = StepOutcome::NonFinite;
        return res;
    }
    double h = dir * std::min(1e-3, std::abs(t_span));
    double prev_unorm = velocity_norm ? velocity_norm(y) : 0.0;
    bool u_increasing = false;

    for (std::size_t step = 0; step < max_steps; ++step) {
        if (dir * (t - t_end) >= 0) return res;
        if (dir * (t + h - t_end) > 0) h = t_end - t;

        std::array<double, N> k2, k3, k4, k5, k6, k7, y1, yt;
        auto stage = [&](const std::array<double, N>& base) { return f(base); };
        for (int i = 0; i < N; ++i) yt[i] = y[i] + h * a21 * k1[i];
        k2 = stage(yt);
        for (int i = 0; i < N; ++i) yt[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        k3 = stage(yt);
        for (int i = 0; i < N; ++i)
            yt[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        k4 = stage(yt);
        for (int i = 0; i < N; ++i)
            yt[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        k5 = stage(yt);
        for (int i = 0; i < N; ++i)
            yt[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] +
                                a64 * k4[i] + a65 * k5[i]);
        k6 = stage(yt);
        for (int i = 0; i < N; ++i)
            y1[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] +
                                b6 * k6[i]);
        k7 = stage(y1);

        if (!finite(y1) || !finite(k7)) {
            res.outcome = StepOutcome::NonFinite;
            return res;
        }

        double err = 0;
        for (int i = 0; i < N; ++i) {
            double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                            e6 * k6[i] + e7 * k7[i]);
            double sc = abs_tol + rel_tol * std::max(std::abs(y[i]), std::abs(y1[i]));
            err += (e / sc) * (e / sc);
        }
        err = std::sqrt(err / N);

        if (err <= 1.0) {
            DenseStep<N> ds;
            ds.t0 = t;
            ds.h = h;
            for (int i = 0; i < N; ++i) {
                double ydiff = y1[i] - y[i];
                double bspl = h * k1[i] - ydiff;
                ds.r1[i] = y[i];
                ds.r2[i] = ydiff;
                ds.r3[i] = bspl;
                ds.r4[i] = ydiff - h * k7[i] - bspl;
                ds.r5[i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] +
                                d6 * k6[i] + d7 * k7[i]);
            }
            res.steps.push_back(ds);
            t += h;
            y = y1;
            k1 = k7;  // FSAL
            res.ts.push_back(t);
            res.states.push_back(y);
            if (velocity_norm) {
                double unorm = velocity_norm(y);
                if (unorm > u_max) {
                    res.outcome = StepOutcome::UMax;
                    return res;
                }
                u_increasing = unorm > prev_unorm;
                prev_unorm = unorm;
            }
        }

        double factor = err <= 1e-30 ? 5.0
                                     : std::min(5.0, std::max(0.2, 0.9 * std::pow(err, -0.2)));
        h *= factor;
        if (std::abs(h) < h_min * std::max(1.0, std::abs(t))) {
            res.outcome = (velocity_norm && u_increasing) ? StepOutcome::UMax
                                                          : StepOutcome::StepCollapse;
            return res;
        }
    }
    res.outcome = StepOutcome::MaxSteps;
    return res;
}

}  // namespace afflab::detail
