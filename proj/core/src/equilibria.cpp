#include "sirsvp/equilibria.hpp"
#include "sirsvp/error.hpp"

#include <cmath>
#include <sstream>

namespace sirsvp
{

DerivedQuantities derived_quantities(const ModelParams& par)
{
    DerivedQuantities q;
    q.gamma = (1.0 - par.p) * par.b + par.nu + par.delta;
    q.r0    = par.beta / q.gamma;
    q.rho   = (par.b + par.alpha) / par.delta;
    if (par.beta > par.delta) {
        q.i_u = (par.beta - q.gamma) / (par.beta - par.delta);
    }
    return q;
}

Equilibrium disease_free_equilibrium()
{
    return {EquilibriumKind::DiseaseFree, 1.0, 0.0, 0.0, {0.0, 0.0}};
}

EndemicQuadratic endemic_quadratic(const ModelParams& par)
{
    const auto q   = derived_quantities(par);
    const double d = par.delta;
    return {
        -d * (par.beta - d),
        d * q.rho * (par.beta - d) + (par.beta - q.gamma) * d + par.beta * par.nu,
        -d * q.rho * (par.beta - q.gamma),
    };
}

std::array<double, 2> equilibrium_residuals(const ModelParams& par, double i, double r)
{
    const auto q = derived_quantities(par);
    return {
        std::abs(par.beta * (1.0 - i - r) - q.gamma + par.delta * i),
        std::abs(par.nu * i - par.delta * (q.rho - i) * r),
    };
}

std::optional<Equilibrium> endemic_equilibrium(const ModelParams& par)
{
    const auto q = derived_quantities(par);
    // Compare beta with gamma directly so that beta == gamma is never endemic.
    if (!(par.beta > q.gamma)) {
        return std::nullopt;
    }
    if (!(par.beta > par.delta)) {
        throw Error(ErrorCode::Internal, "R0 > 1 implies beta > gamma > delta");
    }

    const auto P = endemic_quadratic(par);
    if (!(P(0.0) < 0.0 && P(q.rho) > 0.0)) {
        std::ostringstream os;
        os << "endemic quadratic not bracketed on (0, rho): P(0) = " << P(0.0) << ", P(rho) = " << P(q.rho);
        throw Error(ErrorCode::Internal, os.str());
    }

    // a < 0, c < 0 and b > 0: both roots positive, the smaller one lies in (0, rho).
    // Computing it as c/q avoids the cancellation in (-b + sqrt(disc)) / (2a).
    const double disc = P.b * P.b - 4.0 * P.a * P.c;
    const double qq   = -0.5 * (P.b + std::copysign(std::sqrt(disc), P.b));
    const double r1   = qq / P.a;
    const double r2   = P.c / qq;
    const double i_e  = std::min(r1, r2);

    Equilibrium eq;
    eq.kind      = EquilibriumKind::Endemic;
    eq.I         = i_e;
    eq.R         = par.nu * i_e / (par.delta * (q.rho - i_e));
    eq.S         = 1.0 - eq.I - eq.R;
    eq.residuals = equilibrium_residuals(par, eq.I, eq.R);

    if (!(eq.I > 0.0 && eq.I < q.rho && eq.I < 1.0 && eq.R > 0.0 && eq.S > 0.0)) {
        std::ostringstream os;
        os << "endemic equilibrium (" << eq.S << ", " << eq.I << ", " << eq.R << ") violates its invariants";
        throw Error(ErrorCode::Internal, os.str());
    }
    return eq;
}

std::string_view to_string(Regime regime)
{
    switch (regime) {
    case Regime::DfeGAS:
        return "dfe-gas";
    case Regime::EndemicCertifiedGAS:
        return "endemic-certified-gas";
    case Regime::EndemicUncertified:
        return "endemic-uncertified";
    }
    return "unknown";
}

std::string_view to_string(CertificateBasis basis)
{
    switch (basis) {
    case CertificateBasis::R0AtMostOne:
        return "r0-at-most-one";
    case CertificateBasis::RhoAtLeastOne:
        return "rho-at-least-one";
    case CertificateBasis::IuAtMostRho:
        return "iu-at-most-rho";
    case CertificateBasis::None:
        return "none";
    }
    return "unknown";
}

std::string_view to_string(Fate fate)
{
    switch (fate) {
    case Fate::Extinction:
        return "extinction";
    case Fate::Regulation:
        return "regulation";
    }
    return "unknown";
}

double omega_margin(const ModelParams& par)
{
    const auto q = derived_quantities(par);
    return par.beta - q.gamma - q.rho * (par.beta - par.delta);
}

RegimeReport classify_regime(const ModelParams& par)
{
    const auto q = derived_quantities(par);
    RegimeReport report;
    report.r0      = q.r0;
    report.endemic = endemic_equilibrium(par);

    if (!report.endemic) {
        report.regime = Regime::DfeGAS;
        report.basis  = CertificateBasis::R0AtMostOne;
        return report;
    }
    if (q.rho >= 1.0) {
        report.regime = Regime::EndemicCertifiedGAS;
        report.basis  = CertificateBasis::RhoAtLeastOne;
        return report;
    }

    // rho < 1 here, and beta > gamma > delta so i_u is defined.
    const double margin     = omega_margin(par);
    const bool iu_above_rho = margin > 0.0;

    // The same predicate written as a threshold on beta; both sides must agree
    // unless the margin is at round-off level.
    const double beta_threshold = q.gamma + q.rho * (q.gamma - par.delta) / (1.0 - q.rho);
    const bool beta_above       = par.beta > beta_threshold;
    const double scale          = par.beta + q.gamma + q.rho * par.beta;
    if (iu_above_rho != beta_above && std::abs(margin) > 64 * 2.220446049250313e-16 * scale) {
        std::ostringstream os;
        os << "I_u > rho disagrees with beta > gamma + rho(gamma-delta)/(1-rho) (margin " << margin << ")";
        throw Error(ErrorCode::Internal, os.str());
    }

    if (iu_above_rho) {
        report.regime = Regime::EndemicUncertified;
        report.basis  = CertificateBasis::None;
    }
    else {
        report.regime = Regime::EndemicCertifiedGAS;
        report.basis  = CertificateBasis::IuAtMostRho;
    }
    return report;
}

PopulationFate population_fate(const ModelParams& par)
{
    const auto eq = endemic_equilibrium(par);
    if (!eq) {
        throw Error(ErrorCode::NoEndemicState,
                    "population fate requires an endemic state (R0 > 1); without infection N tends to N*");
    }
    const double effective_birth = par.b - par.delta * eq->I;
    PopulationFate fate;
    fate.threshold_gap = effective_birth - par.mortality.baseline();
    if (fate.threshold_gap <= 0.0) {
        fate.fate = Fate::Extinction;
    }
    else {
        fate.fate = Fate::Regulation;
        fate.n_e  = par.mortality.inverse(effective_birth);
    }
    return fate;
}

double check_constant_population_condition(const ModelParams& par, double mu)
{
    if (!(mu > 0.0)) {
        throw Error(ErrorCode::DomainError, "constant mortality must be > 0");
    }
    const double lhs = par.beta * (par.b - mu) * (par.alpha + mu + par.nu);
    const double rhs = par.delta * (par.alpha + mu) * ((par.p * par.b + par.beta) - (mu + par.nu + par.delta));
    return lhs - rhs;
}

} // namespace sirsvp
