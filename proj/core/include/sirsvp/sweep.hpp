#pragma once

#include "sirsvp/equilibria.hpp"
#include "sirsvp/params.hpp"
#include "sirsvp/state.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace sirsvp
{

namespace sweep_task
{
inline constexpr unsigned equilibria = 1u << 0;
inline constexpr unsigned regime     = 1u << 1;
inline constexpr unsigned fate       = 1u << 2;
inline constexpr unsigned probe      = 1u << 3;
inline constexpr unsigned all        = equilibria | regime | fate | probe;
} // namespace sweep_task

struct ProbeOptions
{
    ReducedState start{0.1, 0.1};
    double t_end = 500.0;
    double eps   = 1e-6;
    double rtol  = 1e-8;
    double atol  = 1e-10;
};

struct SweepSpec
{
    RawParams base;
    std::string parameter = "beta"; // b, beta, nu, delta, p, alpha, mu0 or k
    double lo             = 0.0;
    double hi             = 1.0;
    std::size_t points    = 2;
    unsigned tasks        = sweep_task::equilibria | sweep_task::regime | sweep_task::fate;
    ProbeOptions probe;
    unsigned threads = 0;
};

enum class ProbeStatus
{
    NotRun,
    Converged,
    NotConverged,
    Failed,
};

std::string_view to_string(ProbeStatus status);

struct ProbeOutcome
{
    ProbeStatus status = ProbeStatus::NotRun;
    std::string attractor; // "dfe" or "endemic"
    std::optional<double> time;
};

struct SweepRow
{
    double value = 0.0;
    bool valid   = false;
    std::string skip_reason;

    std::optional<DerivedQuantities> derived;
    std::optional<Equilibrium> endemic;
    std::optional<RegimeReport> regime;
    std::optional<PopulationFate> fate;
    ProbeOutcome probe;
};

struct SweepMetadata
{
    RawParams base;
    std::string parameter;
    double lo          = 0.0;
    double hi          = 0.0;
    std::size_t points = 0;
    std::string timestamp;
    std::string tool_version;
};

struct SweepResult
{
    std::vector<SweepRow> rows; // ordered by parameter value
    std::size_t skipped = 0;
    SweepMetadata meta;
};

/// Parameter value of grid point i: lo + (hi - lo) i / (points - 1), or lo when points == 1.
double sweep_value(const SweepSpec& spec, std::size_t i);

/// Evaluates every grid point. Throws Error(InvalidSpec) for an unknown
/// parameter, lo >= hi or zero points, Error(AllPointsInvalid) when no grid
/// point yields valid parameters. Rows are identical to a sequential run.
SweepResult run_sweep(const SweepSpec& spec);

} // namespace sirsvp
