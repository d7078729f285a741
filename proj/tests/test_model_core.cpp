#include "support.hpp"

#include "sirsvp/error.hpp"
#include "sirsvp/params.hpp"
#include "sirsvp/state.hpp"
#include "sirsvp/vector_field.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace sirsvp;
using sirsvp::test::reference;
using sirsvp::test::reference_raw;
using sirsvp::test::uniform;

TEST(ValidateParams, acceptsReferenceSet)
{
    const ModelParams m = validate_params(reference_raw());
    EXPECT_EQ(m.b, 1.0);
    EXPECT_EQ(m.beta, 3.0);
    EXPECT_EQ(m.mortality.mu0, 0.2);
    EXPECT_EQ(m.mortality.k, 0.1);
    EXPECT_EQ(m.mortality.form, MortalityForm::Affine);
}

TEST(ValidateParams, rejectsPOnBoundary)
{
    auto raw = reference_raw();
    raw.p    = 0.0;
    try {
        validate_params(raw);
        FAIL() << "expected ValidationError";
    }
    catch (const ValidationError& e) {
        EXPECT_TRUE(e.has(ErrorCode::POutOfRange));
        EXPECT_EQ(e.violations().size(), 1u);
    }
    raw.p = 1.0;
    EXPECT_THROW(validate_params(raw), ValidationError);
}

TEST(ValidateParams, rejectsBirthBelowBaselineMortality)
{
    auto raw = reference_raw();
    raw.b    = 0.1;
    try {
        validate_params(raw);
        FAIL() << "expected ValidationError";
    }
    catch (const ValidationError& e) {
        EXPECT_TRUE(e.has(ErrorCode::BirthBelowBaselineMortality));
        EXPECT_EQ(e.code(), ErrorCode::BirthBelowBaselineMortality);
    }
    raw.b = 0.2; // b == mu(0) is also excluded
    EXPECT_THROW(validate_params(raw), ValidationError);
}

TEST(ValidateParams, reportsEveryViolation)
{
    RawParams raw{-1.0, 0.0, 1.0, -2.0, 1.5, 1.0, 0.2, 0.0};
    try {
        validate_params(raw);
        FAIL() << "expected ValidationError";
    }
    catch (const ValidationError& e) {
        int non_positive = 0;
        for (const auto& v : e.violations())
            non_positive += v.code == ErrorCode::NonPositiveRate;
        EXPECT_EQ(non_positive, 4); // b, beta, delta, k
        EXPECT_TRUE(e.has(ErrorCode::POutOfRange));
        EXPECT_TRUE(e.has(ErrorCode::BirthBelowBaselineMortality));
    }
}

TEST(ValidateParams, rejectsNonFinite)
{
    auto raw  = reference_raw();
    raw.alpha = std::nan("");
    try {
        validate_params(raw);
        FAIL();
    }
    catch (const ValidationError& e) {
        ASSERT_EQ(e.violations().size(), 1u);
        EXPECT_EQ(e.violations()[0].code, ErrorCode::NonFinite);
        EXPECT_EQ(e.violations()[0].field, "alpha");
    }
}

TEST(Mortality, affineValuesAndInverse)
{
    const MortalityFn mu{MortalityForm::Affine, 0.2, 0.1};
    EXPECT_DOUBLE_EQ(mu.rate(8.0), 1.0);
    EXPECT_DOUBLE_EQ(mu.inverse(1.0), 8.0);
    EXPECT_DOUBLE_EQ(mu.carrying_capacity(1.0), 8.0);
    EXPECT_DOUBLE_EQ(mu.rate(mu.carrying_capacity(1.0)), 1.0);
    try {
        mu.inverse(0.2);
        FAIL();
    }
    catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::InverseOutOfRange);
    }
}

TEST(Mortality, roundTripAndMonotone)
{
    std::mt19937_64 rng(11);
    const MortalityFn mu{MortalityForm::Affine, 0.2, 0.1};
    for (int i = 0; i < 100; ++i) {
        const double n = uniform(rng, 0.0, 100.0);
        if (n > 0.0) {
            EXPECT_NEAR(mu.inverse(mu.rate(n)), n, 1e-12 * std::max(1.0, n));
        }
        const double n2 = uniform(rng, 0.0, 100.0);
        if (n2 != n) {
            EXPECT_EQ(mu.rate(std::max(n, n2)) > mu.rate(std::min(n, n2)), true);
        }
    }
}

TEST(VfFull, demographicEquilibriumIsFixed)
{
    const auto m      = reference();
    const double nstar = m.mortality.carrying_capacity(m.b);
    const auto d      = vf_full({nstar, 0.0, 0.0, nstar}, m);
    EXPECT_NEAR(d.dX, 0.0, 1e-15);
    EXPECT_EQ(d.dY, 0.0);
    EXPECT_EQ(d.dZ, 0.0);
    EXPECT_NEAR(d.dN, 0.0, 1e-15);
}

TEST(VfFull, referenceState)
{
    const auto d = vf_full({3.0, 1.0, 1.0, 5.0}, reference());
    EXPECT_NEAR(d.dN, 0.5, 1e-14);
    EXPECT_NEAR(d.dY, 0.1, 1e-14);
    // X' = 1*(5 - 1/3) - 0.7*3 - 1.8 + 1 ; Z' = 1/3 - 1.7
    EXPECT_NEAR(d.dX, 5.0 - 1.0 / 3.0 - 2.1 - 1.8 + 1.0, 1e-14);
    EXPECT_NEAR(d.dZ, 1.0 / 3.0 - 1.7, 1e-14);
}

TEST(VfFull, zeroPopulationRejected)
{
    try {
        vf_full({0.0, 0.0, 0.0, 0.0}, reference());
        FAIL();
    }
    catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::ZeroPopulation);
    }
}

TEST(VfFull, componentsSumToPopulationRate)
{
    std::mt19937_64 rng(3);
    for (int i = 0; i < 1000; ++i) {
        const auto m = sirsvp::test::random_params(rng, 0.3, 4.0);
        FullState s{uniform(rng, 0, 50), uniform(rng, 0, 50), uniform(rng, 0, 50), 0.0};
        s.N          = s.X + s.Y + s.Z;
        const auto d = vf_full(s, m);
        EXPECT_NEAR(d.dX + d.dY + d.dZ - d.dN, 0.0, 1e-12 * (1.0 + std::abs(d.dN) + s.N));
    }
}

TEST(VfFraction, diseaseFreeEquilibrium)
{
    const auto d = vf_fraction({1.0, 0.0, 0.0, std::nullopt}, reference());
    EXPECT_EQ(d.dS, 0.0);
    EXPECT_EQ(d.dI, 0.0);
    EXPECT_EQ(d.dR, 0.0);
    EXPECT_FALSE(d.dN.has_value());
}

TEST(VfFraction, referenceState)
{
    const auto d = vf_fraction({0.7, 0.2, 0.1, std::nullopt}, reference());
    EXPECT_NEAR(d.dI, 0.06, 1e-15);
    EXPECT_NEAR(d.dR, 1.0 / 15.0 - 0.18, 1e-15);
    EXPECT_NEAR(d.dS, -0.06 - (1.0 / 15.0 - 0.18), 1e-15);
}

TEST(VfFraction, carriesPopulation)
{
    const auto m = reference();
    const auto d = vf_fraction({0.7, 0.2, 0.1, 5.0}, m);
    ASSERT_TRUE(d.dN.has_value());
    EXPECT_NEAR(*d.dN, (1.0 - 0.7 - 0.2) * 5.0, 1e-14);
}

TEST(VfFraction, simplexViolationRejected)
{
    try {
        vf_fraction({0.7, 0.2, 0.2, std::nullopt}, reference());
        FAIL();
    }
    catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::SimplexViolation);
    }
    // within the 1e-6 input tolerance
    EXPECT_NO_THROW(vf_fraction({0.7 + 5e-7, 0.2, 0.1, std::nullopt}, reference()));
}

TEST(VfFraction, sumsToZeroOnSimplex)
{
    std::mt19937_64 rng(5);
    for (int i = 0; i < 1000; ++i) {
        const auto m      = sirsvp::test::random_params(rng, 0.3, 4.0);
        const auto [I, R] = sirsvp::test::random_triangle_point(rng);
        const auto d      = vf_fraction({1.0 - I - R, I, R, std::nullopt}, m);
        EXPECT_LT(std::abs(d.dS + d.dI + d.dR), 1e-12 * (1.0 + m.beta + m.b + m.alpha + m.nu + m.delta));
    }
}

TEST(VfFraction, boundaryBehaviour)
{
    std::mt19937_64 rng(6);
    for (int i = 0; i < 200; ++i) {
        const auto m   = sirsvp::test::random_params(rng, 0.3, 4.0);
        const double R = uniform(rng, 0.0, 1.0);
        // I = 0 is invariant
        EXPECT_EQ(vf_fraction({1.0 - R, 0.0, R, std::nullopt}, m).dI, 0.0);
        // S = 0 face points inward
        const double I = uniform(rng, 1e-3, 1.0);
        const auto d   = vf_fraction({0.0, I, 1.0 - I, std::nullopt}, m);
        EXPECT_GT(d.dS, 0.0);
        EXPECT_NEAR(d.dS, m.b * (1.0 - m.p * I) + m.alpha * (1.0 - I), 1e-13);
    }
}

TEST(VfReduced, axisAndReferenceState)
{
    const auto m = reference();
    const auto a = vf_reduced({0.0, 0.3}, m);
    EXPECT_EQ(a.dI, 0.0);
    EXPECT_NEAR(a.dR, -1.0 * 2.0 * 0.3, 1e-15);

    const auto d = vf_reduced({0.2, 0.1}, m);
    EXPECT_NEAR(d.dI, 0.06, 1e-15);
    EXPECT_NEAR(d.dR, 1.0 / 15.0 - 0.18, 1e-15);
}

TEST(VfReduced, domainChecked)
{
    try {
        vf_reduced({0.8, 0.5}, reference());
        FAIL();
    }
    catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::DomainError);
    }
    EXPECT_THROW(vf_reduced({-0.1, 0.5}, reference()), Error);
}

TEST(VfReduced, agreesWithFractionField)
{
    std::mt19937_64 rng(7);
    for (int i = 0; i < 1000; ++i) {
        const auto m      = sirsvp::test::random_params(rng, 0.3, 4.0);
        const auto [I, R] = sirsvp::test::random_triangle_point(rng);
        const auto red    = vf_reduced({I, R}, m);
        const auto frac   = vf_fraction({1.0 - I - R, I, R, std::nullopt}, m);
        EXPECT_NEAR(red.dI, frac.dI, 1e-12);
        EXPECT_NEAR(red.dR, frac.dR, 1e-12);
    }
}

// d/dt (X/N) = (X' N - X N') / N^2 must reproduce the fraction field.
TEST(ChangeOfVariables, quotientRuleMatchesFractionField)
{
    std::mt19937_64 rng(8);
    for (int i = 0; i < 1000; ++i) {
        const auto m = sirsvp::test::random_params(rng, 0.3, 4.0);
        FullState s{uniform(rng, 0.01, 20), uniform(rng, 0.01, 20), uniform(rng, 0.01, 20), 0.0};
        s.N              = s.X + s.Y + s.Z;
        const auto full  = vf_full(s, m);
        const auto frac  = vf_fraction(to_fractions(s), m);
        auto quotient    = [&](double c, double dc) { return (dc * s.N - c * full.dN) / (s.N * s.N); };
        EXPECT_NEAR(quotient(s.X, full.dX), frac.dS, 1e-10);
        EXPECT_NEAR(quotient(s.Y, full.dY), frac.dI, 1e-10);
        EXPECT_NEAR(quotient(s.Z, full.dZ), frac.dR, 1e-10);
        ASSERT_TRUE(frac.dN.has_value());
        EXPECT_NEAR(*frac.dN, full.dN, 1e-10 * (1.0 + std::abs(full.dN)));
    }
}

TEST(States, invariants)
{
    EXPECT_TRUE(is_valid(FullState{3, 1, 1, 5}));
    EXPECT_FALSE(is_valid(FullState{3, 1, 1, 6}));
    EXPECT_FALSE(is_valid(FullState{-1, 1, 5, 5}));
    EXPECT_TRUE(is_valid(FractionState{0.5, 0.3, 0.2, std::nullopt}));
    EXPECT_FALSE(is_valid(FractionState{0.5, 0.3, 0.3, std::nullopt}));
    EXPECT_TRUE(is_valid(ReducedState{0.3, 0.3}));
    EXPECT_FALSE(is_valid(ReducedState{0.0, 0.0}));
    EXPECT_FALSE(is_valid(ReducedState{0.6, 0.6}));

    const auto n = normalized(FractionState{0.5 + 4e-7, 0.3, 0.2, std::nullopt});
    EXPECT_NEAR(n.S + n.I + n.R, 1.0, 1e-15);
    EXPECT_THROW(normalized(FractionState{0.5 + 4e-6, 0.3, 0.2, std::nullopt}), Error);
}
