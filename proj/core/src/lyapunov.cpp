#include "sirsvp/lyapunov.hpp"
#include "sirsvp/error.hpp"
#include "sirsvp/parallel.hpp"
#include "sirsvp/vector_field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace sirsvp
{

namespace
{

void require_endemic(const Equilibrium& eq)
{
    if (eq.kind != EquilibriumKind::Endemic || !(eq.I > 0.0)) {
        throw Error(ErrorCode::NoEndemicState, "L_EE needs the endemic equilibrium");
    }
}

void require_positive_infective(const ReducedState& s)
{
    if (!(s.I > 0.0)) {
        std::ostringstream os;
        os << "L_EE is defined for I > 0, got I = " << s.I;
        throw Error(ErrorCode::DomainError, os.str());
    }
}

double quadratic_weight(const Equilibrium& eq, const ModelParams& par)
{
    return par.beta / (2.0 * (par.nu + par.delta * eq.R));
}

} // namespace

std::string_view to_string(Region region)
{
    switch (region) {
    case Region::FullSimplex:
        return "full-simplex";
    case Region::Omega:
        return "omega";
    }
    return "unknown";
}

std::string_view to_string(CertificateKind kind)
{
    switch (kind) {
    case CertificateKind::Endemic:
        return "l_ee";
    case CertificateKind::DiseaseFree:
        return "l_dfe";
    }
    return "unknown";
}

double l_dfe(const FractionState& s)
{
    return s.I;
}

double l_dfe_orbital(const FractionState& s, const ModelParams& par)
{
    const auto q = derived_quantities(par);
    return (q.gamma * (q.r0 - 1.0) - par.beta * s.R - (par.beta - par.delta) * s.I) * s.I;
}

double l_ee(const ReducedState& s, const Equilibrium& eq, const ModelParams& par)
{
    require_endemic(eq);
    require_positive_infective(s);
    const double x  = s.I / eq.I;
    // I - I_e - I_e ln(I/I_e) = I_e (x - 1 - ln x); log1p keeps it accurate near x = 1.
    const double l1 = eq.I * ((x - 1.0) - std::log1p(x - 1.0));
    const double dr = s.R - eq.R;
    return l1 + quadratic_weight(eq, par) * dr * dr;
}

std::array<double, 2> l_ee_gradient(const ReducedState& s, const Equilibrium& eq, const ModelParams& par)
{
    require_endemic(eq);
    require_positive_infective(s);
    return {1.0 - eq.I / s.I, 2.0 * quadratic_weight(eq, par) * (s.R - eq.R)};
}

double l_ee_orbital(const ReducedState& s, const Equilibrium& eq, const ModelParams& par)
{
    require_endemic(eq);
    require_positive_infective(s);
    const double rho = (par.b + par.alpha) / par.delta;
    const double di  = s.I - eq.I;
    const double dr  = s.R - eq.R;
    return -(par.beta - par.delta) * di * di -
           par.beta * par.delta / (par.nu + par.delta * eq.R) * (rho - s.I) * dr * dr;
}

namespace
{

struct RowResult
{
    std::size_t evaluated = 0;
    double min_l          = std::numeric_limits<double>::infinity();
    double max_orbital    = -std::numeric_limits<double>::infinity();
    std::size_t violation_count = 0;
    std::vector<CertificateViolation> violations;
};

template <class Evaluate>
CertificateReport grid_certificate(CertificateKind kind, Region region, double i_max, const CertifyOptions& opt,
                                   const Evaluate& evaluate)
{
    if (opt.resolution < 2) {
        throw Error(ErrorCode::InvalidSpec, "grid resolution must be >= 2");
    }
    const std::size_t n = opt.resolution;
    std::vector<RowResult> rows(n);

    // I on cell centres of (0, i_max); R on the closed [0, 1] lattice.
    parallel_for(n, opt.threads, [&](std::size_t i) {
        RowResult& row = rows[i];
        const double I = i_max * (static_cast<double>(i) + 0.5) / static_cast<double>(n);
        for (std::size_t j = 0; j < n; ++j) {
            const double R = static_cast<double>(j) / static_cast<double>(n - 1);
            if (I + R > 1.0)
                break;
            ++row.evaluated;
            CertificateViolation point{I, R, 0.0, 0.0};
            const bool inside_ball = evaluate(point);
            bool bad               = false;
            if (inside_ball) {
                bad = point.dL > 0.0;
            }
            else {
                row.min_l       = std::min(row.min_l, point.L);
                row.max_orbital = std::max(row.max_orbital, point.dL);
                bad             = kind == CertificateKind::Endemic ? !(point.L > 0.0 && point.dL < 0.0)
                                                                   : !(point.dL <= 0.0);
            }
            if (bad) {
                ++row.violation_count;
                if (row.violations.size() < opt.max_violations)
                    row.violations.push_back(point);
            }
        }
    });

    CertificateReport report;
    report.kind             = kind;
    report.region           = region;
    report.i_max            = i_max;
    report.resolution       = n;
    report.exclusion_radius = opt.exclusion_radius;
    report.min_l            = std::numeric_limits<double>::infinity();
    report.max_orbital      = -std::numeric_limits<double>::infinity();
    // Rows are visited in increasing I and points within a row in increasing R,
    // so concatenation is already lexicographic.
    for (auto& row : rows) {
        report.evaluated += row.evaluated;
        report.min_l       = std::min(report.min_l, row.min_l);
        report.max_orbital = std::max(report.max_orbital, row.max_orbital);
        report.violation_count += row.violation_count;
        for (auto& v : row.violations) {
            if (report.violations.size() < opt.max_violations)
                report.violations.push_back(v);
        }
    }
    report.pass = report.evaluated > 0 && report.violation_count == 0;
    return report;
}

} // namespace

CertificateReport certify(const ModelParams& par, const Equilibrium& eq, Region region, const CertifyOptions& opt)
{
    require_endemic(eq);
    const double rho = (par.b + par.alpha) / par.delta;
    double i_max     = 1.0;
    if (region == Region::Omega) {
        if (!(rho > 0.0)) {
            throw Error(ErrorCode::RegionEmpty, "Omega = {I < rho} is empty");
        }
        i_max = std::min(rho, 1.0);
    }
    const double r2 = opt.exclusion_radius * opt.exclusion_radius;
    return grid_certificate(CertificateKind::Endemic, region, i_max, opt, [&](CertificateViolation& pt) {
        const ReducedState s{pt.I, pt.R};
        pt.L          = l_ee(s, eq, par);
        pt.dL         = l_ee_orbital(s, eq, par);
        const double di = pt.I - eq.I, dr = pt.R - eq.R;
        return di * di + dr * dr < r2;
    });
}

CertificateReport certify_dfe(const ModelParams& par, const CertifyOptions& opt)
{
    return grid_certificate(CertificateKind::DiseaseFree, Region::FullSimplex, 1.0, opt,
                            [&](CertificateViolation& pt) {
                                const FractionState s{1.0 - pt.I - pt.R, pt.I, pt.R, std::nullopt};
                                pt.L  = l_dfe(s);
                                pt.dL = l_dfe_orbital(s, par);
                                return false;
                            });
}

OmegaInvarianceReport omega_invariance_check(const ModelParams& par, const Equilibrium& eq, std::size_t samples)
{
    require_endemic(eq);
    const auto q = derived_quantities(par);

    OmegaInvarianceReport report;
    report.margin             = omega_margin(par);
    report.attractivity_bound = report.margin;
    report.predicate          = report.margin <= 0.0;

    if (q.rho >= 1.0) {
        report.trivially_invariant  = true;
        report.predicate            = true;
        report.boundary_nonpositive = true;
        return report;
    }

    const std::size_t n = std::max<std::size_t>(samples, 2);
    report.samples.reserve(n);
    report.max_flux = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
        const double R  = (1.0 - q.rho) * static_cast<double>(j) / static_cast<double>(n - 1);
        const double dI = kernel::reduced({q.rho, R}, par)[0];
        report.samples.push_back({R, dI});
        report.max_flux = std::max(report.max_flux, dI);
    }
    report.boundary_nonpositive = report.max_flux <= 0.0;
    return report;
}

} // namespace sirsvp
