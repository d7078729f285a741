#pragma once

#include "sirsvp/equilibria.hpp"
#include "sirsvp/params.hpp"
#include "sirsvp/state.hpp"

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

namespace sirsvp
{

/// L_DFE = I.
double l_dfe(const FractionState& s);

/// dI/dt written as (gamma (R0 - 1) - beta R - (beta - delta) I) I.
double l_dfe_orbital(const FractionState& s, const ModelParams& params);

/// Volterra-type function for the endemic state,
///   L_EE = I - I_e - I_e ln(I / I_e) + beta / (2 (nu + delta R_e)) (R - R_e)^2.
/// Throws Error(DomainError) when I <= 0 or `eq` is not endemic.
double l_ee(const ReducedState& s, const Equilibrium& eq, const ModelParams& params);

/// Gradient (dL/dI, dL/dR) of l_ee.
std::array<double, 2> l_ee_gradient(const ReducedState& s, const Equilibrium& eq, const ModelParams& params);

/// Closed-form orbital derivative of L_EE along the reduced field,
///   -(beta - delta)(I - I_e)^2 - beta delta / (nu + delta R_e) (rho - I)(R - R_e)^2.
double l_ee_orbital(const ReducedState& s, const Equilibrium& eq, const ModelParams& params);

enum class Region
{
    FullSimplex,
    Omega, // I < rho
};

std::string_view to_string(Region region);

enum class CertificateKind
{
    Endemic,     // L_EE on the reduced triangle
    DiseaseFree, // L_DFE = I on the simplex
};

std::string_view to_string(CertificateKind kind);

struct CertificateViolation
{
    double I  = 0.0;
    double R  = 0.0;
    double L  = 0.0;
    double dL = 0.0;
};

struct CertifyOptions
{
    std::size_t resolution       = 200;
    double exclusion_radius      = 1e-6;
    std::size_t max_violations   = 100;
    unsigned threads             = 0; // 0: hardware concurrency
};

struct CertificateReport
{
    CertificateKind kind = CertificateKind::Endemic;
    Region region        = Region::FullSimplex;
    double i_max         = 1.0; // grid covers 0 < I < i_max (I <= 1 for the full triangle)
    std::size_t resolution = 0;
    double exclusion_radius = 0.0;
    std::size_t evaluated   = 0;
    double min_l            = 0.0; // over evaluated points outside the exclusion ball
    double max_orbital      = 0.0; // same
    bool pass               = false;
    std::size_t violation_count = 0;
    std::vector<CertificateViolation> violations; // sorted by (I, R), capped
};

/// Samples L_EE and its orbital derivative on a resolution x resolution grid
/// over the region intersected with {I > 0, R >= 0, I + R <= 1}. Passes iff
/// L > 0 and dL < 0 at every point outside the exclusion ball around `eq` and
/// dL <= 0 inside it. Throws Error(NoEndemicState) unless eq is endemic.
CertificateReport certify(const ModelParams& params, const Equilibrium& eq, Region region,
                          const CertifyOptions& options = {});

/// Same grid check for L_DFE = I: passes iff I' <= 0 everywhere on the simplex.
CertificateReport certify_dfe(const ModelParams& params, const CertifyOptions& options = {});

struct BoundaryFlux
{
    double R  = 0.0;
    double dI = 0.0;
};

struct OmegaInvarianceReport
{
    bool trivially_invariant = false; // rho >= 1
    bool predicate           = false; // I_u <= rho
    double margin            = 0.0;   // beta - gamma - rho (beta - delta)
    std::vector<BoundaryFlux> samples; // I' on {I = rho, 0 <= R <= 1 - rho}
    double max_flux          = 0.0;
    bool boundary_nonpositive = false;
    /// Uniform bound on I' over I in [rho, I_u], equal to the margin.
    double attractivity_bound = 0.0;
};

/// Checks that {I < rho} is forward invariant by sampling I' along I = rho.
/// Throws Error(NoEndemicState) when R0 <= 1.
OmegaInvarianceReport omega_invariance_check(const ModelParams& params, const Equilibrium& eq,
                                             std::size_t samples = 100);

} // namespace sirsvp
