#pragma once

#include "sirsvp/dormand_prince.hpp"
#include "sirsvp/error.hpp"
#include "sirsvp/params.hpp"
#include "sirsvp/state.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace sirsvp
{

enum class System
{
    Full,     // (X, Y, Z, N)
    Fraction, // (S, I, R) with N appended when the initial state carries it
    Reduced,  // (I, R)
};

std::string_view to_string(System system);

using InitialState = std::variant<FullState, FractionState, ReducedState>;

/// Optional early stop once the state is within `eps` (max norm) of `target`.
struct ConvergenceStop
{
    std::vector<double> target;
    double eps = 1e-8;
};

struct IntegrationSpec
{
    InitialState initial = ReducedState{};
    double t_end          = 0.0;
    double rtol           = 1e-8;
    double atol           = 1e-10;
    std::size_t max_steps = 1'000'000;
    /// > 0: emit samples on a uniform grid using dense output; 0: every accepted step.
    double sample_interval = 0.0;
    std::optional<ConvergenceStop> stop_on_convergence;
    /// Full/Fraction-with-N runs stop once N < extinction_fraction * N*.
    double extinction_fraction = 1e-6;
};

struct Sample
{
    double t = 0.0;
    std::vector<double> state;
};

enum class TerminalEvent
{
    ReachedTEnd,
    Converged,
    ExtinctionThreshold,
    StepFailure,
    MaxStepsExceeded,
};

std::string_view to_string(TerminalEvent event);

struct TrajectoryStatistics
{
    std::size_t accepted    = 0;
    std::size_t rejected    = 0;
    std::size_t evaluations = 0;
    /// Renormalisations onto the simplex triggered by drift > 1e-9.
    std::size_t projections = 0;
    /// Largest |S+I+R-1| seen before projection (fraction runs only).
    double max_simplex_drift = 0.0;
};

struct Trajectory
{
    System system = System::Reduced;
    std::vector<std::string> components;
    std::vector<Sample> samples;
    TrajectoryStatistics stats;
    TerminalEvent terminal = TerminalEvent::ReachedTEnd;
    std::optional<double> terminal_time;
    std::vector<double> target; // set for Converged

    const Sample& back() const { return samples.back(); }
    std::size_t dimension() const { return components.size(); }
};

/// Integration that ended in StepFailure or MaxStepsExceeded; keeps the partial trajectory.
class IntegrationError : public Error
{
public:
    IntegrationError(ErrorCode code, const std::string& message, Trajectory partial)
        : Error(code, message)
        , m_partial(std::move(partial))
    {
    }

    const Trajectory& partial() const noexcept { return m_partial; }

private:
    Trajectory m_partial;
};

System system_of(const InitialState& initial);

/// Integrates the selected vector field. Throws Error(InvalidSpec) for bad
/// tolerances/horizon or an invalid initial state, IntegrationError on step
/// underflow or when max_steps is exhausted.
Trajectory integrate(const IntegrationSpec& spec, const ModelParams& params);

/// Earliest sample time after which the max-norm distance to `target` stays
/// below eps through the end of the trajectory.
std::optional<double> detect_convergence(const Trajectory& traj, const std::vector<double>& target, double eps);

} // namespace sirsvp
