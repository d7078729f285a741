#pragma once

#include <optional>

namespace sirsvp
{

/// Drift tolerance used on user input for S+I+R = 1.
inline constexpr double simplex_input_tolerance = 1e-6;
/// Drift alarm used after integration steps.
inline constexpr double simplex_drift_tolerance = 1e-9;

/// Compartment counts plus total population.
struct FullState
{
    double X = 0.0;
    double Y = 0.0;
    double Z = 0.0;
    double N = 0.0;
};

/// Population fractions; N is carried only when the demographic equation is integrated.
struct FractionState
{
    double S = 1.0;
    double I = 0.0;
    double R = 0.0;
    std::optional<double> N;
};

/// (I, R) with S = 1 - I - R eliminated.
struct ReducedState
{
    double I = 0.0;
    double R = 0.0;
};

/// X+Y+Z = N within 1e-9*max(1,N) and all components nonnegative.
bool is_valid(const FullState& s);

/// Nonnegative components and |S+I+R-1| <= tol.
bool is_valid(const FractionState& s, double tol = simplex_input_tolerance);

/// I >= 0, R >= 0, I+R <= 1 (each within tol) and (I,R) != (0,0).
bool is_valid(const ReducedState& s, double tol = 0.0);

inline double simplex_defect(const FractionState& s) { return s.S + s.I + s.R - 1.0; }

/// Rescales (S,I,R) onto S+I+R = 1. Throws Error(SimplexViolation) if the
/// defect exceeds tol or any component is negative.
FractionState normalized(const FractionState& s, double tol = simplex_input_tolerance);

/// (X/N, Y/N, Z/N) with N carried. Throws Error(ZeroPopulation) when N <= 0.
FractionState to_fractions(const FullState& s);

inline ReducedState to_reduced(const FractionState& s) { return {s.I, s.R}; }

inline FractionState to_fractions(const ReducedState& s) { return {1.0 - s.I - s.R, s.I, s.R, std::nullopt}; }

} // namespace sirsvp
