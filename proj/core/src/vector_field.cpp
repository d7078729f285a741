#include "sirsvp/vector_field.hpp"
#include "sirsvp/error.hpp"

#include <cmath>
#include <sstream>

namespace sirsvp
{

namespace kernel
{

std::array<double, 4> full(const std::array<double, 4>& y, const ModelParams& par)
{
    const auto [X, Y, Z, N] = y;
    const double mu        = par.mortality.rate(N);
    const double incidence = par.beta * X * Y / N;
    return {
        par.b * (N - par.p * Y) - mu * X - incidence + par.alpha * Z,
        par.b * par.p * Y + incidence - (mu + par.nu + par.delta) * Y,
        par.nu * Y - (par.alpha + mu) * Z,
        (par.b - mu) * N - par.delta * Y,
    };
}

std::array<double, 3> fraction(const std::array<double, 3>& y, const ModelParams& par)
{
    const auto [S, I, R] = y;
    const double gamma   = (1.0 - par.p) * par.b + par.nu + par.delta;
    return {
        par.b * (1.0 - S - par.p * I) - (par.beta - par.delta) * S * I + par.alpha * R,
        (par.beta * S - gamma + par.delta * I) * I,
        par.nu * I - (par.b + par.alpha - par.delta * I) * R,
    };
}

std::array<double, 4> fraction_with_population(const std::array<double, 4>& y, const ModelParams& par)
{
    auto d = fraction({y[0], y[1], y[2]}, par);
    const double N = y[3];
    return {d[0], d[1], d[2], (par.b - par.mortality.rate(N) - par.delta * y[1]) * N};
}

std::array<double, 2> reduced(const std::array<double, 2>& y, const ModelParams& par)
{
    const auto [I, R]  = y;
    const double gamma = (1.0 - par.p) * par.b + par.nu + par.delta;
    const double rho   = (par.b + par.alpha) / par.delta;
    return {
        (par.beta * (1.0 - I - R) - gamma + par.delta * I) * I,
        par.nu * I - par.delta * (rho - I) * R,
    };
}

} // namespace kernel

FullRates vf_full(const FullState& s, const ModelParams& params)
{
    if (!(s.N > 0.0)) {
        throw Error(ErrorCode::ZeroPopulation, "full vector field requires N > 0");
    }
    auto d = kernel::full({s.X, s.Y, s.Z, s.N}, params);
    return {d[0], d[1], d[2], d[3]};
}

FractionRates vf_fraction(const FractionState& s, const ModelParams& params)
{
    if (!(std::abs(simplex_defect(s)) <= simplex_input_tolerance)) {
        std::ostringstream os;
        os << "S+I+R-1 = " << simplex_defect(s) << " exceeds " << simplex_input_tolerance;
        throw Error(ErrorCode::SimplexViolation, os.str());
    }
    auto d = kernel::fraction({s.S, s.I, s.R}, params);
    FractionRates out{d[0], d[1], d[2], std::nullopt};
    if (s.N) {
        out.dN = (params.b - params.mortality.rate(*s.N) - params.delta * s.I) * *s.N;
    }
    return out;
}

ReducedRates vf_reduced(const ReducedState& s, const ModelParams& params)
{
    constexpr double tol = simplex_input_tolerance;
    if (!(s.I >= -tol && s.R >= -tol && s.I + s.R <= 1.0 + tol)) {
        std::ostringstream os;
        os << "reduced state (" << s.I << ", " << s.R << ") outside I>=0, R>=0, I+R<=1";
        throw Error(ErrorCode::DomainError, os.str());
    }
    auto d = kernel::reduced({s.I, s.R}, params);
    return {d[0], d[1]};
}

} // namespace sirsvp
