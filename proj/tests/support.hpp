#pragma once

// Test-only helpers: reference parameter sets, random generators and
// independent oracles. Nothing here calls into the code paths it is used to check.

#include "sirsvp/params.hpp"

#include <cmath>
#include <functional>
#include <random>

namespace sirsvp::test
{

inline RawParams reference_raw()
{
    return {1.0, 3.0, 1.0 / 3.0, 1.0, 1.0 / 3.0, 1.0, 0.2, 0.1};
}

inline ModelParams reference()
{
    return validate_params(reference_raw());
}

/// b=1, p=0.5, nu=0.5, delta=4, alpha=1 with the given beta (rho = 0.5, gamma = 5).
inline ModelParams small_rho(double beta)
{
    return validate_params({1.0, beta, 0.5, 4.0, 0.5, 1.0, 0.2, 0.1});
}

/// Plain bisection for a sign change of f on [lo, hi].
inline double bisect(const std::function<double(double)>& f, double lo, double hi, double tol = 1e-12)
{
    double flo = f(lo);
    for (int it = 0; it < 400 && hi - lo > tol; ++it) {
        const double mid  = 0.5 * (lo + hi);
        const double fmid = f(mid);
        if ((fmid < 0) == (flo < 0)) {
            lo  = mid;
            flo = fmid;
        }
        else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

/// P(I) written out directly from the equilibrium equations, independent of endemic_quadratic().
inline double endemic_polynomial(const ModelParams& m, double I)
{
    const double g   = (1 - m.p) * m.b + m.nu + m.delta;
    const double rho = (m.b + m.alpha) / m.delta;
    return -m.delta * (m.beta - m.delta) * I * I +
           (m.delta * rho * (m.beta - m.delta) + (m.beta - g) * m.delta + m.beta * m.nu) * I -
           m.delta * rho * (m.beta - g);
}

inline double uniform(std::mt19937_64& rng, double lo, double hi)
{
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Random valid parameters with R0 = beta/gamma drawn from [r0_lo, r0_hi].
inline ModelParams random_params(std::mt19937_64& rng, double r0_lo, double r0_hi)
{
    RawParams raw;
    raw.b        = uniform(rng, 0.2, 2.0);
    raw.nu       = uniform(rng, 0.1, 2.0);
    raw.delta    = uniform(rng, 0.1, 5.0);
    raw.p        = uniform(rng, 0.05, 0.95);
    raw.alpha    = uniform(rng, 0.05, 2.0);
    raw.mu0      = uniform(rng, 0.05, 0.95) * raw.b;
    raw.k        = uniform(rng, 0.01, 1.0);
    const double gamma = (1 - raw.p) * raw.b + raw.nu + raw.delta;
    raw.beta     = uniform(rng, r0_lo, r0_hi) * gamma;
    return validate_params(raw);
}

/// Uniform point on the reduced triangle {I, R >= 0, I + R <= 1} with I >= i_min.
inline std::pair<double, double> random_triangle_point(std::mt19937_64& rng, double i_min = 0.0)
{
    while (true) {
        const double I = uniform(rng, 0.0, 1.0);
        const double R = uniform(rng, 0.0, 1.0);
        if (I + R <= 1.0 && I >= i_min)
            return {I, R};
    }
}

} // namespace sirsvp::test
