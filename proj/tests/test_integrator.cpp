#include "support.hpp"

#include "sirsvp/dormand_prince.hpp"
#include "sirsvp/equilibria.hpp"
#include "sirsvp/integrator.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <iomanip>
#include <random>

using namespace sirsvp;
using sirsvp::test::reference;
using sirsvp::test::reference_raw;

namespace
{

double decay_error(double rtol)
{
    StepControl ctl;
    ctl.rtol = rtol;
    ctl.atol = rtol * 1e-2;
    double t = 0.0;
    std::array<double, 1> y{1.0};
    StepStatistics stats;
    auto f      = [](double, const std::array<double, 1>& v) { return std::array<double, 1>{-v[0]}; };
    auto status = dopri5_solve<1>(f, t, y, 1.0, ctl, [](const auto&, auto&) { return StepAction::Continue; }, stats);
    EXPECT_EQ(status, OdeStatus::ReachedEnd);
    EXPECT_EQ(t, 1.0);
    return std::abs(y[0] - std::exp(-1.0));
}

ModelParams dfe_params()
{
    auto raw = reference_raw();
    raw.beta = 1.5;
    return validate_params(raw);
}

} // namespace

TEST(DormandPrince, exponentialDecay)
{
    for (double rtol : {1e-4, 1e-6, 1e-8, 1e-10}) {
        EXPECT_LT(decay_error(rtol), 10.0 * rtol) << "rtol " << rtol;
    }
}

TEST(DormandPrince, fifthOrderWithFixedSteps)
{
    auto f = [](double, const std::array<double, 1>& v) { return std::array<double, 1>{-v[0]}; };
    auto fixed = [&](int n) {
        std::array<double, 1> y{1.0};
        const double h = 1.0 / n;
        for (int i = 0; i < n; ++i) {
            auto k1 = f(i * h, y);
            y       = dopri5_trial<1>(f, i * h, y, k1, h).y;
        }
        return std::abs(y[0] - std::exp(-1.0));
    };
    const double e1 = fixed(8), e2 = fixed(16), e3 = fixed(32);
    EXPECT_NEAR(std::log2(e1 / e2), 5.0, 0.3);
    EXPECT_NEAR(std::log2(e2 / e3), 5.0, 0.3);
}

TEST(DormandPrince, toleranceProportionality)
{
    // Tightening the tolerance 32x shrinks the global error by roughly 2^5.
    const double loose = decay_error(1e-5);
    const double tight = decay_error(1e-5 / 32.0);
    const double ratio = loose / tight;
    EXPECT_GT(ratio, 8.0);
    EXPECT_LT(ratio, 128.0);
}

TEST(DormandPrince, denseOutputMatchesSolution)
{
    auto f = [](double, const std::array<double, 1>& v) { return std::array<double, 1>{-v[0]}; };
    StepControl ctl;
    ctl.rtol = 1e-9;
    ctl.atol = 1e-12;
    double t = 0.0;
    std::array<double, 1> y{1.0};
    StepStatistics stats;
    double worst = 0.0;
    dopri5_solve<1>(f, t, y, 3.0, ctl,
                    [&](const AcceptedStep<1>& step, auto&) {
                        for (double theta : {0.1, 0.37, 0.5, 0.81}) {
                            const double tt = step.t0 + theta * (step.t1 - step.t0);
                            worst           = std::max(worst, std::abs(step.interpolate(tt)[0] - std::exp(-tt)));
                        }
                        return StepAction::Continue;
                    },
                    stats);
    EXPECT_LT(worst, 1e-8);
}

TEST(DormandPrince, stepUnderflowOnBlowUp)
{
    auto f = [](double, const std::array<double, 1>& v) { return std::array<double, 1>{v[0] * v[0]}; };
    double t = 0.0;
    std::array<double, 1> y{1.0};
    StepStatistics stats;
    auto status = dopri5_solve<1>(f, t, y, 2.0, StepControl{}, [](const auto&, auto&) { return StepAction::Continue; },
                                  stats);
    EXPECT_TRUE(status == OdeStatus::StepUnderflow || status == OdeStatus::MaxSteps);
    EXPECT_LT(t, 1.0 + 1e-6) << std::setprecision(17) << t << " y=" << y[0];
}

TEST(Integrate, reducedConvergesToEndemicState)
{
    IntegrationSpec spec;
    spec.initial  = ReducedState{0.3, 0.3};
    spec.t_end    = 200.0;
    const auto tr = integrate(spec, reference());
    EXPECT_EQ(tr.terminal, TerminalEvent::ReachedTEnd);
    EXPECT_EQ(tr.back().t, 200.0);
    EXPECT_NEAR(tr.back().state[0], 0.3819660112501051517954, 1e-6);
    EXPECT_NEAR(tr.back().state[1], 0.0786893258332632321364, 1e-6);
    for (std::size_t k = 1; k < tr.samples.size(); ++k)
        ASSERT_GT(tr.samples[k].t, tr.samples[k - 1].t);
}

TEST(Integrate, diseaseFreeFractionRun)
{
    IntegrationSpec spec;
    spec.initial  = FractionState{0.5, 0.4, 0.1, std::nullopt};
    spec.t_end    = 200.0;
    const auto tr = integrate(spec, dfe_params());
    EXPECT_LT(tr.back().state[1], 1e-8);
    double previous = tr.samples.front().state[1];
    for (const auto& s : tr.samples) {
        EXPECT_LE(s.state[1], previous + 1e-9);
        previous = s.state[1];
        EXPECT_LT(std::abs(s.state[0] + s.state[1] + s.state[2] - 1.0), 1e-7);
    }
}

TEST(Integrate, simplexConservationOnRandomRuns)
{
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 40; ++trial) {
        const auto m      = sirsvp::test::random_params(rng, 0.3, 6.0);
        const auto [I, R] = sirsvp::test::random_triangle_point(rng, 1e-3);
        IntegrationSpec spec;
        spec.initial  = FractionState{1.0 - I - R, I, R, std::nullopt};
        spec.t_end    = 100.0;
        const auto tr = integrate(spec, m);
        for (const auto& s : tr.samples) {
            ASSERT_LT(std::abs(s.state[0] + s.state[1] + s.state[2] - 1.0), 1e-7);
            for (double c : s.state)
                ASSERT_GT(c, -1e-7);
        }
        EXPECT_LE(tr.stats.max_simplex_drift, 1e-7);
    }
}

TEST(Integrate, fullAndFractionFormulationsAgree)
{
    const auto m = reference();
    IntegrationSpec full;
    full.initial         = FullState{3.0, 1.0, 1.0, 5.0};
    full.t_end           = 50.0;
    full.sample_interval = 0.5;
    IntegrationSpec frac = full;
    frac.initial         = FractionState{0.6, 0.2, 0.2, 5.0};

    const auto a = integrate(full, m);
    const auto b = integrate(frac, m);
    ASSERT_EQ(a.samples.size(), b.samples.size());
    double worst = 0.0;
    for (std::size_t k = 0; k < a.samples.size(); ++k) {
        ASSERT_NEAR(a.samples[k].t, b.samples[k].t, 1e-12);
        const auto& x = a.samples[k].state;
        const auto& y = b.samples[k].state;
        worst         = std::max({worst, std::abs(x[0] / x[3] - y[0]), std::abs(x[1] / x[3] - y[1]),
                                  std::abs(x[2] / x[3] - y[2]), std::abs(x[3] - y[3]) / x[3]});
    }
    EXPECT_LT(worst, 1e-5);
}

TEST(Integrate, fullSystemKeepsCompartmentSum)
{
    IntegrationSpec spec;
    spec.initial  = FullState{3.0, 1.0, 1.0, 5.0};
    spec.t_end    = 100.0;
    const auto tr = integrate(spec, reference());
    for (const auto& s : tr.samples) {
        EXPECT_NEAR(s.state[0] + s.state[1] + s.state[2], s.state[3], 1e-9 * std::max(1.0, s.state[3]));
    }
}

TEST(Integrate, uniformSamplingEndsAtHorizon)
{
    IntegrationSpec spec;
    spec.initial         = ReducedState{0.3, 0.3};
    spec.t_end           = 10.0;
    spec.sample_interval = 0.25;
    const auto tr        = integrate(spec, reference());
    ASSERT_EQ(tr.samples.size(), 41u);
    for (std::size_t k = 0; k < tr.samples.size(); ++k)
        EXPECT_NEAR(tr.samples[k].t, 0.25 * static_cast<double>(k), 1e-12);
}

TEST(Integrate, extinctionThresholdStopsFullRun)
{
    auto raw = reference_raw();
    raw.mu0  = 0.7;
    IntegrationSpec spec;
    spec.initial  = FullState{3.0, 1.0, 1.0, 5.0};
    spec.t_end    = 1000.0;
    const auto m  = validate_params(raw);
    const auto tr = integrate(spec, m);
    EXPECT_EQ(tr.terminal, TerminalEvent::ExtinctionThreshold);
    ASSERT_TRUE(tr.terminal_time.has_value());
    EXPECT_LT(*tr.terminal_time, 1000.0);
    EXPECT_LT(tr.back().state[3], 1e-6 * m.mortality.carrying_capacity(m.b));
}

TEST(Integrate, stopsOnConvergence)
{
    IntegrationSpec spec;
    spec.initial             = ReducedState{0.3, 0.3};
    spec.t_end               = 500.0;
    spec.stop_on_convergence = ConvergenceStop{{0.3819660112501051, 0.0786893258332632}, 1e-4};
    const auto tr            = integrate(spec, reference());
    EXPECT_EQ(tr.terminal, TerminalEvent::Converged);
    EXPECT_LT(*tr.terminal_time, 500.0);
    EXPECT_EQ(tr.target.size(), 2u);
}

TEST(Integrate, maxStepsKeepsPartialTrajectory)
{
    IntegrationSpec spec;
    spec.initial   = ReducedState{0.3, 0.3};
    spec.t_end     = 200.0;
    spec.max_steps = 5;
    try {
        integrate(spec, reference());
        FAIL();
    }
    catch (const IntegrationError& e) {
        EXPECT_EQ(e.code(), ErrorCode::MaxStepsExceeded);
        EXPECT_EQ(e.partial().terminal, TerminalEvent::MaxStepsExceeded);
        EXPECT_FALSE(e.partial().samples.empty());
    }
}

TEST(Integrate, rejectsInvalidSpecs)
{
    IntegrationSpec spec;
    spec.initial = ReducedState{0.3, 0.3};
    spec.t_end   = 0.0;
    EXPECT_THROW(integrate(spec, reference()), Error);
    spec.t_end = 1.0;
    spec.rtol  = 1e-2;
    EXPECT_THROW(integrate(spec, reference()), Error);
    spec.rtol = 1e-8;
    spec.atol = 1e-5;
    EXPECT_THROW(integrate(spec, reference()), Error);
    spec.atol    = 1e-10;
    spec.initial = ReducedState{0.0, 0.0};
    EXPECT_THROW(integrate(spec, reference()), Error);
    spec.initial = FractionState{0.5, 0.5, 0.5, std::nullopt};
    EXPECT_THROW(integrate(spec, reference()), Error);
    spec.initial = FullState{1.0, 1.0, 1.0, 4.0};
    EXPECT_THROW(integrate(spec, reference()), Error);
}

TEST(Integrate, normalizesSlightlyOffSimplexInput)
{
    IntegrationSpec spec;
    spec.initial  = FractionState{0.5 + 5e-7, 0.4, 0.1, std::nullopt};
    spec.t_end    = 1.0;
    const auto tr = integrate(spec, reference());
    const auto& s = tr.samples.front().state;
    EXPECT_NEAR(s[0] + s[1] + s[2], 1.0, 1e-15);
}

TEST(DetectConvergence, constantTrajectory)
{
    Trajectory tr;
    tr.components = {"I", "R"};
    for (int k = 0; k < 5; ++k)
        tr.samples.push_back({static_cast<double>(k), {0.2, 0.1}});
    auto t = detect_convergence(tr, {0.2, 0.1}, 1e-12);
    ASSERT_TRUE(t.has_value());
    EXPECT_EQ(*t, 0.0);
}

TEST(DetectConvergence, farEndIsAbsent)
{
    Trajectory tr;
    tr.components = {"I", "R"};
    tr.samples.push_back({0.0, {0.2, 0.1}});
    tr.samples.push_back({1.0, {0.5, 0.1}});
    EXPECT_FALSE(detect_convergence(tr, {0.2, 0.1}, 1e-3).has_value());
    EXPECT_THROW(detect_convergence(tr, {0.2}, 1e-3), Error);
}

TEST(DetectConvergence, reenteringCountsFromLastEntry)
{
    Trajectory tr;
    tr.components = {"x"};
    const double xs[] = {1.0, 0.0, 1.0, 0.0, 0.0};
    for (int k = 0; k < 5; ++k)
        tr.samples.push_back({static_cast<double>(k), {xs[k]}});
    EXPECT_EQ(*detect_convergence(tr, {0.0}, 0.5), 3.0);
}

TEST(DetectConvergence, timeDecreasesWithLooserEps)
{
    IntegrationSpec spec;
    spec.initial                  = ReducedState{0.3, 0.3};
    spec.t_end                    = 200.0;
    const auto tr                 = integrate(spec, reference());
    const std::vector<double> eq = {0.3819660112501051, 0.0786893258332632};
    double previous               = 0.0;
    for (double eps : {1e-2, 1e-3, 1e-4, 1e-5, 1e-6}) {
        const auto t = detect_convergence(tr, eq, eps);
        ASSERT_TRUE(t.has_value()) << eps;
        EXPECT_GE(*t, previous);
        previous = *t;
    }
}
