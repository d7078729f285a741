#pragma once

#include "sirsvp/params.hpp"
#include "sirsvp/state.hpp"

#include <array>
#include <optional>

namespace sirsvp
{

struct FullRates
{
    double dX = 0.0;
    double dY = 0.0;
    double dZ = 0.0;
    double dN = 0.0;
};

struct FractionRates
{
    double dS = 0.0;
    double dI = 0.0;
    double dR = 0.0;
    std::optional<double> dN;
};

struct ReducedRates
{
    double dI = 0.0;
    double dR = 0.0;
};

/// Compartment-count SIRS field with density-dependent mortality mu(N).
/// Throws Error(ZeroPopulation) for N <= 0.
FullRates vf_full(const FullState& s, const ModelParams& params);

/// Fraction field; when s.N is set also returns N' = (b - mu(N) - delta*I) N.
/// Throws Error(SimplexViolation) when |S+I+R-1| > 1e-6.
FractionRates vf_fraction(const FractionState& s, const ModelParams& params);

/// Reduced (I,R) field. Throws Error(DomainError) outside the closed triangle
/// I,R >= 0, I+R <= 1 (tolerance 1e-6).
ReducedRates vf_reduced(const ReducedState& s, const ModelParams& params);

/// Unchecked kernels on flat arrays, used inside the integrator where RK
/// stages may step marginally outside the invariant sets.
namespace kernel
{
std::array<double, 4> full(const std::array<double, 4>& y, const ModelParams& params);
std::array<double, 3> fraction(const std::array<double, 3>& y, const ModelParams& params);
std::array<double, 4> fraction_with_population(const std::array<double, 4>& y, const ModelParams& params);
std::array<double, 2> reduced(const std::array<double, 2>& y, const ModelParams& params);
} // namespace kernel

} // namespace sirsvp
