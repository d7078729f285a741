#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>

namespace sirsvp
{

/// Dormand-Prince 5(4) embedded pair with FSAL, PI step-size control and the
/// standard fourth-order continuous extension. Header-only over fixed-size states.
namespace dopri
{

inline constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;

inline constexpr double a21 = 1.0 / 5.0;
inline constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
inline constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
inline constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                        a54 = -212.0 / 729.0;
inline constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                        a65 = -5103.0 / 18656.0;
inline constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0, a75 = -2187.0 / 6784.0,
                        a76 = 11.0 / 84.0;

// fifth minus fourth order weights
inline constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0, e5 = -17253.0 / 339200.0,
                        e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

// dense output
inline constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                        d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                        d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

} // namespace dopri

struct StepControl
{
    double rtol             = 1e-8;
    double atol             = 1e-10;
    std::size_t max_steps   = 1'000'000;
    double h_max            = 0.0; // 0: unbounded
    double h_init           = 0.0; // 0: automatic
};

struct StepStatistics
{
    std::size_t accepted    = 0;
    std::size_t rejected    = 0;
    std::size_t evaluations = 0;
};

enum class OdeStatus
{
    ReachedEnd,
    Stopped,
    StepUnderflow,
    MaxSteps,
};

enum class StepAction
{
    Continue,
    Modified, // observer changed the state; derivative must be recomputed
    Stop,
};

/// One accepted step [t0, t1] with its interpolant.
template <std::size_t Dim>
struct AcceptedStep
{
    using State = std::array<double, Dim>;

    double t0 = 0.0;
    double t1 = 0.0;
    std::array<State, 5> cont{};

    State interpolate(double t) const
    {
        const double theta  = (t - t0) / (t1 - t0);
        const double theta1 = 1.0 - theta;
        State y;
        for (std::size_t i = 0; i < Dim; ++i) {
            y[i] = cont[0][i] +
                   theta * (cont[1][i] + theta1 * (cont[2][i] + theta * (cont[3][i] + theta1 * cont[4][i])));
        }
        return y;
    }
};

template <std::size_t Dim>
struct TrialStep
{
    using State = std::array<double, Dim>;
    State y;     // fifth-order solution
    State error; // local error estimate
    State k7;    // f(t+h, y), reused as k1 of the next step
    std::array<State, 5> cont;
};

/// One Dormand-Prince trial step of size h from (t, y) with k1 = f(t, y).
template <std::size_t Dim, class Rhs>
TrialStep<Dim> dopri5_trial(const Rhs& f, double t, const std::array<double, Dim>& y,
                            const std::array<double, Dim>& k1, double h)
{
    using namespace dopri;
    using State = std::array<double, Dim>;
    State tmp;

    for (std::size_t i = 0; i < Dim; ++i)
        tmp[i] = y[i] + h * a21 * k1[i];
    const State k2 = f(t + c2 * h, tmp);
    for (std::size_t i = 0; i < Dim; ++i)
        tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    const State k3 = f(t + c3 * h, tmp);
    for (std::size_t i = 0; i < Dim; ++i)
        tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    const State k4 = f(t + c4 * h, tmp);
    for (std::size_t i = 0; i < Dim; ++i)
        tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    const State k5 = f(t + c5 * h, tmp);
    for (std::size_t i = 0; i < Dim; ++i)
        tmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    const State k6 = f(t + h, tmp);

    TrialStep<Dim> out;
    for (std::size_t i = 0; i < Dim; ++i)
        out.y[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
    out.k7 = f(t + h, out.y);
    for (std::size_t i = 0; i < Dim; ++i) {
        out.error[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * out.k7[i]);
    }
    for (std::size_t i = 0; i < Dim; ++i) {
        const double ydiff = out.y[i] - y[i];
        const double bspl  = h * k1[i] - ydiff;
        out.cont[0][i]     = y[i];
        out.cont[1][i]     = ydiff;
        out.cont[2][i]     = bspl;
        out.cont[3][i]     = ydiff - h * out.k7[i] - bspl;
        out.cont[4][i] =
            h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * out.k7[i]);
    }
    return out;
}

/// Adaptive integration of y' = f(t, y) from t0 to t_end. `on_step` is called
/// after every accepted step as on_step(const AcceptedStep<Dim>&, State& y) and
/// returns a StepAction. On return `y` and `t` hold the last accepted state.
template <std::size_t Dim, class Rhs, class Observer>
OdeStatus dopri5_solve(const Rhs& f, double& t, std::array<double, Dim>& y, double t_end, const StepControl& ctl,
                       Observer&& on_step, StepStatistics& stats)
{
    using State = std::array<double, Dim>;

    constexpr double safe    = 0.9;
    constexpr double beta    = 0.04;
    constexpr double expo1   = 0.2 - beta * 0.75;
    constexpr double facc1   = 1.0 / 0.2; // largest step decrease
    constexpr double facc2   = 1.0 / 10.0; // largest step increase
    constexpr double uround  = std::numeric_limits<double>::epsilon();

    const double h_max = ctl.h_max > 0.0 ? ctl.h_max : std::abs(t_end - t);

    auto eval = [&](double tt, const State& yy) {
        ++stats.evaluations;
        return f(tt, yy);
    };

    auto scale = [&](double a, double b) { return ctl.atol + ctl.rtol * std::max(std::abs(a), std::abs(b)); };

    State k1 = eval(t, y);

    double h = ctl.h_init;
    if (h <= 0.0) {
        double dnf = 0.0, dny = 0.0;
        for (std::size_t i = 0; i < Dim; ++i) {
            const double sk = scale(y[i], 0.0);
            dnf += (k1[i] / sk) * (k1[i] / sk);
            dny += (y[i] / sk) * (y[i] / sk);
        }
        h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : std::sqrt(dny / dnf) * 0.01;
        h = std::min(h, h_max);
        State y1;
        for (std::size_t i = 0; i < Dim; ++i)
            y1[i] = y[i] + h * k1[i];
        const State k2 = eval(t + h, y1);
        double der2    = 0.0;
        for (std::size_t i = 0; i < Dim; ++i) {
            const double d = (k2[i] - k1[i]) / scale(y[i], 0.0);
            der2 += d * d;
        }
        der2             = std::sqrt(der2) / h;
        const double der = std::max(std::sqrt(dnf), der2);
        const double h1  = der <= 1e-15 ? std::max(1e-6, h * 1e-3) : std::pow(0.01 / der, 0.2);
        h                = std::min({100.0 * h, h1, h_max});
    }

    double facold = 1e-4;
    bool reject   = false;
    std::size_t steps = 0;

    while (true) {
        if (steps >= ctl.max_steps) {
            return OdeStatus::MaxSteps;
        }
        if (0.1 * std::abs(h) <= std::abs(t) * uround) {
            return OdeStatus::StepUnderflow;
        }
        bool last = false;
        if (t + 1.01 * h - t_end >= 0.0) {
            h    = t_end - t;
            last = true;
        }
        ++steps;

        auto trial = dopri5_trial<Dim>(eval, t, y, k1, h);

        double err = 0.0;
        for (std::size_t i = 0; i < Dim; ++i) {
            const double e = trial.error[i] / scale(y[i], trial.y[i]);
            err += e * e;
        }
        err = std::sqrt(err / static_cast<double>(Dim));
        if (!std::isfinite(err)) {
            err = 1e10;
        }

        const double fac11 = std::pow(err, expo1);
        double fac         = fac11 / std::pow(facold, beta);
        fac                = std::max(facc2, std::min(facc1, fac / safe));
        double h_new       = h / fac;

        if (err <= 1.0) {
            facold = std::max(err, 1e-4);
            ++stats.accepted;

            AcceptedStep<Dim> step;
            step.t0   = t;
            step.t1   = last ? t_end : t + h;
            step.cont = trial.cont;

            t  = step.t1;
            y  = trial.y;
            k1 = trial.k7;

            const StepAction action = on_step(step, y);
            if (action == StepAction::Stop) {
                return OdeStatus::Stopped;
            }
            if (action == StepAction::Modified) {
                k1 = eval(t, y);
            }
            if (last) {
                return OdeStatus::ReachedEnd;
            }
            if (std::abs(h_new) > h_max) {
                h_new = h_max;
            }
            if (reject) {
                h_new = std::min(h_new, h);
            }
            reject = false;
        }
        else {
            h_new = h / std::min(facc1, fac11 / safe);
            ++stats.rejected;
            reject = true;
        }
        h = h_new;
    }
}

} // namespace sirsvp
