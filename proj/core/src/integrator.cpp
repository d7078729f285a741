#include "sirsvp/integrator.hpp"
#include "sirsvp/vector_field.hpp"

#include <cmath>
#include <sstream>

namespace sirsvp
{

std::string_view to_string(System system)
{
    switch (system) {
    case System::Full:
        return "full";
    case System::Fraction:
        return "fraction";
    case System::Reduced:
        return "reduced";
    }
    return "unknown";
}

std::string_view to_string(TerminalEvent event)
{
    switch (event) {
    case TerminalEvent::ReachedTEnd:
        return "reached-t-end";
    case TerminalEvent::Converged:
        return "converged";
    case TerminalEvent::ExtinctionThreshold:
        return "extinction-threshold";
    case TerminalEvent::StepFailure:
        return "step-failure";
    case TerminalEvent::MaxStepsExceeded:
        return "max-steps-exceeded";
    }
    return "unknown";
}

System system_of(const InitialState& initial)
{
    if (std::holds_alternative<FullState>(initial))
        return System::Full;
    if (std::holds_alternative<FractionState>(initial))
        return System::Fraction;
    return System::Reduced;
}

namespace
{

void check_spec(const IntegrationSpec& spec)
{
    std::ostringstream os;
    if (!(spec.t_end > 0.0) || !std::isfinite(spec.t_end))
        os << "t_end must be > 0; ";
    if (!(spec.rtol >= 1e-12 && spec.rtol <= 1e-3))
        os << "rtol must lie in [1e-12, 1e-3]; ";
    if (!(spec.atol >= 1e-14 && spec.atol <= 1e-6))
        os << "atol must lie in [1e-14, 1e-6]; ";
    if (spec.max_steps == 0)
        os << "max_steps must be positive; ";
    if (!(spec.sample_interval >= 0.0))
        os << "sample_interval must be >= 0; ";
    if (spec.stop_on_convergence && !(spec.stop_on_convergence->eps > 0.0))
        os << "convergence eps must be > 0; ";
    if (!os.str().empty())
        throw Error(ErrorCode::InvalidSpec, os.str());
}

/// Per-system behaviour plugged into the common driver.
template <std::size_t Dim>
struct SystemHooks
{
    using State = std::array<double, Dim>;
    std::vector<std::string> components;
    // Index of N in the state vector, if carried.
    std::optional<std::size_t> population_index;
    bool simplex = false;
};

template <std::size_t Dim, class Rhs>
Trajectory run(const IntegrationSpec& spec, const ModelParams& params, System system, const Rhs& rhs,
               std::array<double, Dim> y, const SystemHooks<Dim>& hooks)
{
    using State = std::array<double, Dim>;

    Trajectory traj;
    traj.system     = system;
    traj.components = hooks.components;

    if (spec.stop_on_convergence && spec.stop_on_convergence->target.size() != Dim) {
        throw Error(ErrorCode::DimensionMismatch, "convergence target dimension does not match the system");
    }

    auto push = [&](double t, const State& s) { traj.samples.push_back({t, std::vector<double>(s.begin(), s.end())}); };

    double extinction_level = 0.0;
    if (hooks.population_index) {
        extinction_level = spec.extinction_fraction * params.mortality.carrying_capacity(params.b);
    }

    double t = 0.0;
    push(t, y);
    double next_sample = spec.sample_interval;

    auto on_step = [&](const AcceptedStep<Dim>& step, State& ys) -> StepAction {
        StepAction action = StepAction::Continue;

        if constexpr (Dim >= 3) {
            if (hooks.simplex) {
                const double sum   = ys[0] + ys[1] + ys[2];
                const double drift = std::abs(sum - 1.0);
                traj.stats.max_simplex_drift = std::max(traj.stats.max_simplex_drift, drift);
                if (drift > simplex_drift_tolerance) {
                    for (std::size_t i = 0; i < 3; ++i)
                        ys[i] /= sum;
                    ++traj.stats.projections;
                    action = StepAction::Modified;
                }
            }
        }

        if (spec.sample_interval > 0.0) {
            // Dense samples strictly inside the step; the step end is emitted below
            // only when it lands on the grid or is the final point.
            while (next_sample < step.t1 - 1e-12 * std::max(1.0, step.t1)) {
                push(next_sample, step.interpolate(next_sample));
                next_sample += spec.sample_interval;
            }
        }

        bool stop = false;
        if (hooks.population_index && ys[*hooks.population_index] < extinction_level) {
            traj.terminal      = TerminalEvent::ExtinctionThreshold;
            traj.terminal_time = step.t1;
            stop               = true;
        }
        if (!stop && spec.stop_on_convergence) {
            double dist = 0.0;
            for (std::size_t i = 0; i < Dim; ++i)
                dist = std::max(dist, std::abs(ys[i] - spec.stop_on_convergence->target[i]));
            if (dist < spec.stop_on_convergence->eps) {
                traj.terminal      = TerminalEvent::Converged;
                traj.terminal_time = step.t1;
                traj.target        = spec.stop_on_convergence->target;
                stop               = true;
            }
        }

        const bool at_end = step.t1 >= spec.t_end;
        if (spec.sample_interval <= 0.0 || stop || at_end ||
            std::abs(step.t1 - next_sample) <= 1e-12 * std::max(1.0, step.t1)) {
            push(step.t1, ys);
            if (spec.sample_interval > 0.0 && std::abs(step.t1 - next_sample) <= 1e-12 * std::max(1.0, step.t1))
                next_sample += spec.sample_interval;
        }
        return stop ? StepAction::Stop : action;
    };

    StepControl ctl;
    ctl.rtol      = spec.rtol;
    ctl.atol      = spec.atol;
    ctl.max_steps = spec.max_steps;

    StepStatistics ode_stats;
    const OdeStatus status = dopri5_solve<Dim>(rhs, t, y, spec.t_end, ctl, on_step, ode_stats);
    traj.stats.accepted    = ode_stats.accepted;
    traj.stats.rejected    = ode_stats.rejected;
    traj.stats.evaluations = ode_stats.evaluations;

    switch (status) {
    case OdeStatus::ReachedEnd:
        traj.terminal      = TerminalEvent::ReachedTEnd;
        traj.terminal_time = t;
        break;
    case OdeStatus::Stopped:
        break;
    case OdeStatus::StepUnderflow: {
        traj.terminal      = TerminalEvent::StepFailure;
        traj.terminal_time = t;
        std::ostringstream os;
        os << "step size underflow at t = " << t;
        throw IntegrationError(ErrorCode::StepFailure, os.str(), std::move(traj));
    }
    case OdeStatus::MaxSteps: {
        traj.terminal      = TerminalEvent::MaxStepsExceeded;
        traj.terminal_time = t;
        std::ostringstream os;
        os << "max_steps = " << spec.max_steps << " exhausted at t = " << t;
        throw IntegrationError(ErrorCode::MaxStepsExceeded, os.str(), std::move(traj));
    }
    }
    return traj;
}

} // namespace

Trajectory integrate(const IntegrationSpec& spec, const ModelParams& params)
{
    check_spec(spec);

    if (const auto* full = std::get_if<FullState>(&spec.initial)) {
        if (!is_valid(*full) || !(full->N > 0.0)) {
            throw Error(ErrorCode::InvalidSpec, "initial full state needs X,Y,Z >= 0, N = X+Y+Z > 0");
        }
        SystemHooks<4> hooks{{"X", "Y", "Z", "N"}, 3, false};
        auto rhs = [&params](double, const std::array<double, 4>& y) { return kernel::full(y, params); };
        return run<4>(spec, params, System::Full, rhs, {full->X, full->Y, full->Z, full->N}, hooks);
    }

    if (const auto* frac = std::get_if<FractionState>(&spec.initial)) {
        FractionState s;
        try {
            s = normalized(*frac);
        }
        catch (const Error& e) {
            throw Error(ErrorCode::InvalidSpec, e.what());
        }
        if (s.N) {
            if (!(*s.N > 0.0)) {
                throw Error(ErrorCode::InvalidSpec, "initial population N must be > 0");
            }
            SystemHooks<4> hooks{{"S", "I", "R", "N"}, 3, true};
            auto rhs = [&params](double, const std::array<double, 4>& y) {
                return kernel::fraction_with_population(y, params);
            };
            return run<4>(spec, params, System::Fraction, rhs, {s.S, s.I, s.R, *s.N}, hooks);
        }
        SystemHooks<3> hooks{{"S", "I", "R"}, std::nullopt, true};
        auto rhs = [&params](double, const std::array<double, 3>& y) { return kernel::fraction(y, params); };
        return run<3>(spec, params, System::Fraction, rhs, {s.S, s.I, s.R}, hooks);
    }

    const auto& red = std::get<ReducedState>(spec.initial);
    if (!is_valid(red, simplex_input_tolerance)) {
        throw Error(ErrorCode::InvalidSpec, "initial reduced state must satisfy I,R >= 0, I+R <= 1, (I,R) != (0,0)");
    }
    SystemHooks<2> hooks{{"I", "R"}, std::nullopt, false};
    auto rhs = [&params](double, const std::array<double, 2>& y) { return kernel::reduced(y, params); };
    return run<2>(spec, params, System::Reduced, rhs, {red.I, red.R}, hooks);
}

std::optional<double> detect_convergence(const Trajectory& traj, const std::vector<double>& target, double eps)
{
    if (target.size() != traj.dimension()) {
        throw Error(ErrorCode::DimensionMismatch, "target dimension does not match trajectory");
    }
    auto distance = [&](const Sample& s) {
        double d = 0.0;
        for (std::size_t i = 0; i < target.size(); ++i)
            d = std::max(d, std::abs(s.state[i] - target[i]));
        return d;
    };
    std::optional<double> since;
    for (auto it = traj.samples.rbegin(); it != traj.samples.rend(); ++it) {
        if (!(distance(*it) < eps))
            break;
        since = it->t;
    }
    return since;
}

} // namespace sirsvp
