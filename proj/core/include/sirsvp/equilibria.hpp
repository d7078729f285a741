#pragma once

#include "sirsvp/params.hpp"

#include <array>
#include <optional>
#include <string_view>

namespace sirsvp
{

struct DerivedQuantities
{
    double gamma = 0.0;         // (1-p) b + nu + delta
    double r0    = 0.0;         // beta / gamma
    double rho   = 0.0;         // (b + alpha) / delta
    std::optional<double> i_u;  // (beta - gamma)/(beta - delta), only when beta > delta
};

DerivedQuantities derived_quantities(const ModelParams& params);

enum class EquilibriumKind
{
    DiseaseFree,
    Endemic,
};

struct Equilibrium
{
    EquilibriumKind kind = EquilibriumKind::DiseaseFree;
    double S             = 1.0;
    double I             = 0.0;
    double R             = 0.0;
    /// Absolute residuals of the two (I', R') equilibrium equations.
    std::array<double, 2> residuals{0.0, 0.0};
};

/// E0 = (1, 0, 0).
Equilibrium disease_free_equilibrium();

/// Coefficients of the endemic quadratic P(I) = a I^2 + b I + c.
struct EndemicQuadratic
{
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;

    double operator()(double i) const { return (a * i + b) * i + c; }
};

EndemicQuadratic endemic_quadratic(const ModelParams& params);

/// Residuals of beta(1-I-R) - gamma + delta I = 0 and nu I - delta(rho - I) R = 0.
std::array<double, 2> equilibrium_residuals(const ModelParams& params, double i, double r);

/// Unique endemic equilibrium, or nullopt when R0 <= 1.
std::optional<Equilibrium> endemic_equilibrium(const ModelParams& params);

enum class Regime
{
    DfeGAS,
    EndemicCertifiedGAS,
    EndemicUncertified,
};

enum class CertificateBasis
{
    R0AtMostOne,
    RhoAtLeastOne,
    IuAtMostRho,
    None,
};

std::string_view to_string(Regime regime);
std::string_view to_string(CertificateBasis basis);

struct RegimeReport
{
    double r0               = 0.0;
    Regime regime           = Regime::DfeGAS;
    CertificateBasis basis  = CertificateBasis::R0AtMostOne;
    std::optional<Equilibrium> endemic;
};

RegimeReport classify_regime(const ModelParams& params);

/// beta - gamma - rho (beta - delta); I_u <= rho iff this is <= 0 (for beta > delta).
double omega_margin(const ModelParams& params);

enum class Fate
{
    Extinction,
    Regulation,
};

std::string_view to_string(Fate fate);

struct PopulationFate
{
    Fate fate = Fate::Regulation;
    std::optional<double> n_e;
    double threshold_gap = 0.0; // b - delta I_e - mu(0)
};

/// Long-run demography under the endemic state. Throws Error(NoEndemicState) when R0 <= 1.
PopulationFate population_fate(const ModelParams& params);

/// LHS - RHS of the parameter identity under which N is constant in the
/// constant-mortality model: beta(b-mu)(alpha+mu+nu) = delta(alpha+mu)((pb+beta)-(mu+nu+delta)).
double check_constant_population_condition(const ModelParams& params, double mu_const);

} // namespace sirsvp
