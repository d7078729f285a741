#include "sirsvp/sweep.hpp"
#include "sirsvp/error.hpp"
#include "sirsvp/integrator.hpp"
#include "sirsvp/parallel.hpp"
#include "sirsvp/version.hpp"

#include <chrono>
#include <ctime>
#include <sstream>

namespace sirsvp
{

std::string_view to_string(ProbeStatus status)
{
    switch (status) {
    case ProbeStatus::NotRun:
        return "not-run";
    case ProbeStatus::Converged:
        return "converged";
    case ProbeStatus::NotConverged:
        return "not-converged";
    case ProbeStatus::Failed:
        return "failed";
    }
    return "unknown";
}

double sweep_value(const SweepSpec& spec, std::size_t i)
{
    if (spec.points <= 1)
        return spec.lo;
    if (i + 1 == spec.points)
        return spec.hi;
    return spec.lo + (spec.hi - spec.lo) * static_cast<double>(i) / static_cast<double>(spec.points - 1);
}

namespace
{

std::string utc_timestamp()
{
    const auto now     = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

ProbeOutcome run_probe(const ModelParams& params, const std::optional<Equilibrium>& endemic,
                       const ProbeOptions& opt)
{
    ProbeOutcome out;
    std::vector<double> target{0.0, 0.0};
    out.attractor = "dfe";
    if (endemic) {
        target        = {endemic->I, endemic->R};
        out.attractor = "endemic";
    }
    IntegrationSpec spec;
    spec.initial = opt.start;
    spec.t_end   = opt.t_end;
    spec.rtol    = opt.rtol;
    spec.atol    = opt.atol;
    try {
        const auto traj = integrate(spec, params);
        out.time        = detect_convergence(traj, target, opt.eps);
        out.status      = out.time ? ProbeStatus::Converged : ProbeStatus::NotConverged;
    }
    catch (const Error&) {
        out.status = ProbeStatus::Failed;
    }
    return out;
}

SweepRow evaluate_point(const SweepSpec& spec, double RawParams::*field, double value)
{
    SweepRow row;
    row.value = value;

    RawParams raw = spec.base;
    raw.*field    = value;
    ModelParams params;
    try {
        params = validate_params(raw);
    }
    catch (const ValidationError& e) {
        row.valid = false;
        std::ostringstream os;
        for (std::size_t i = 0; i < e.violations().size(); ++i) {
            const auto& v = e.violations()[i];
            os << (i ? "; " : "") << to_string(v.code) << "(" << v.field << ")";
        }
        row.skip_reason = os.str();
        return row;
    }
    row.valid = true;

    row.derived = derived_quantities(params);
    row.endemic = endemic_equilibrium(params);
    if (spec.tasks & sweep_task::regime) {
        row.regime = classify_regime(params);
    }
    if ((spec.tasks & sweep_task::fate) && row.endemic) {
        row.fate = population_fate(params);
    }
    if (spec.tasks & sweep_task::probe) {
        row.probe = run_probe(params, row.endemic, spec.probe);
    }
    if (!(spec.tasks & sweep_task::equilibria)) {
        row.endemic.reset();
    }
    return row;
}

} // namespace

SweepResult run_sweep(const SweepSpec& spec)
{
    const auto field = raw_param_field(spec.parameter);
    if (!field) {
        throw Error(ErrorCode::InvalidSpec, "unknown sweep parameter '" + spec.parameter + "'");
    }
    if (spec.points == 0) {
        throw Error(ErrorCode::InvalidSpec, "sweep needs at least one point");
    }
    if (spec.points > 1 && !(spec.lo < spec.hi)) {
        throw Error(ErrorCode::InvalidSpec, "sweep range needs lo < hi");
    }

    SweepResult result;
    result.rows.resize(spec.points);
    parallel_for(spec.points, spec.threads, [&](std::size_t i) {
        result.rows[i] = evaluate_point(spec, *field, sweep_value(spec, i));
    });

    for (const auto& row : result.rows) {
        if (!row.valid)
            ++result.skipped;
    }
    if (result.skipped == result.rows.size()) {
        throw Error(ErrorCode::AllPointsInvalid, "no grid point of the sweep yields valid parameters");
    }

    result.meta = {spec.base, spec.parameter, spec.lo, spec.hi, spec.points, utc_timestamp(),
                   std::string(version)};
    return result;
}

} // namespace sirsvp
