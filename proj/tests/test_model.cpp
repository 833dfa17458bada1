#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "invosc/model.hpp"

using namespace invosc;

TEST(ModelParams, ValidationRejectsBadValues) {
    EXPECT_NO_THROW((ModelParams{1.0, 0.0, 4, 1e-9}.validate()));
    EXPECT_THROW((ModelParams{0.0, 0.0, 16, 1e-9}.validate()), ParameterError);
    EXPECT_THROW((ModelParams{1.0, -0.1, 16, 1e-9}.validate()), ParameterError);
    EXPECT_THROW((ModelParams{1.0, 0.0, 3, 1e-9}.validate()), ParameterError);
    EXPECT_THROW((ModelParams{1.0, 0.0, 16, 0.0}.validate()), ParameterError);
    EXPECT_THROW((ModelParams{NAN, 0.0, 16, 1e-9}.validate()), ParameterError);
}

TEST(Regime, ClassificationAroundTheExceptionalPoint) {
    EXPECT_EQ(classify_regime({1.0, 0.5}), Regime::BelowEP);
    EXPECT_EQ(classify_regime({1.0, 1.0}), Regime::AtEP);
    EXPECT_EQ(classify_regime({1.0, 1.0 + 1e-12}), Regime::AtEP);
    EXPECT_EQ(classify_regime({1.0, 1.5}), Regime::AboveEP);
    EXPECT_EQ(classify_regime({2.0, 2.0}), Regime::AtEP);
    EXPECT_DOUBLE_EQ(exceptional_coupling(2.5), 2.5);
}

TEST(EffectiveFrequency, KnownValues) {
    auto f = effective_frequency({1.0, 0.0});
    EXPECT_EQ(f.regime, Regime::BelowEP);
    EXPECT_DOUBLE_EQ(f.value, 1.0);

    f = effective_frequency({1.0, 1.0});
    EXPECT_EQ(f.regime, Regime::AtEP);
    EXPECT_DOUBLE_EQ(f.value, 0.0);

    f = effective_frequency({1.0, 0.6});
    EXPECT_EQ(f.regime, Regime::BelowEP);
    EXPECT_NEAR(f.value, 0.8, 1e-15);

    f = effective_frequency({1.0, 1.3});
    EXPECT_EQ(f.regime, Regime::AboveEP);
    EXPECT_NEAR(f.value, 0.830662, 1e-6);
}

TEST(EffectiveFrequency, SquareIsAbsoluteDifferenceOfSquares) {
    for (double omega : {0.5, 1.0, 3.0})
        for (double g : {0.0, 0.2, 0.49, 0.7, 2.0, 5.0}) {
            const auto f = effective_frequency({omega, g});
            EXPECT_NEAR(f.value * f.value, std::abs(omega * omega - g * g), 1e-12 * (omega * omega + g * g));
        }
}

TEST(Eta, ClosedForms) {
    EXPECT_DOUBLE_EQ(eta_from_g({1.0, 0.0}), 0.0);
    EXPECT_NEAR(eta_from_g({1.0, 0.6}), std::log(2.0), 1e-15);
    EXPECT_NEAR(eta_from_g({1.0, 0.3}), 0.5 * std::log(1.3 / 0.7), 1e-15);
    EXPECT_THROW(eta_from_g({1.0, 1.0}), RegimeError);
    EXPECT_THROW(eta_from_g({1.0, 1.2}), RegimeError);
}

TEST(Eta, SinhEtaMatchesCouplingOverEffectiveFrequency) {
    for (double g : {0.1, 0.3, 0.6, 0.9, 0.99}) {
        const ModelParams p{1.0, g};
        EXPECT_NEAR(std::sinh(eta_from_g(p)), g / effective_frequency(p).value, 1e-12);
    }
}

TEST(Potential, ProfileValues) {
    const std::vector<double> xs{-1.0, 1.0, 2.0};
    auto v = potential_profile({1.0, 1.0}, xs);
    for (const auto& s : v)
        EXPECT_EQ(s.v, 0.0);
    v = potential_profile({1.0, 0.0}, xs);
    EXPECT_DOUBLE_EQ(v[1].v, -0.5);
    v = potential_profile({1.0, 0.6}, xs);
    EXPECT_NEAR(v[1].v, -0.4, 1e-15);
    EXPECT_DOUBLE_EQ(v[0].v, v[1].v);
    v = potential_profile({1.0, 1.7}, xs);
    EXPECT_NEAR(v[1].v, 0.5 * std::sqrt(1.89), 1e-15);
}

TEST(Potential, CurvatureSignsAndConventions) {
    EXPECT_LT(potential_curvature({1.0, 0.3}), 0.0);
    EXPECT_LT(potential_curvature({1.0, 0.7}), 0.0);
    EXPECT_EQ(potential_curvature({1.0, 1.0}), 0.0);
    EXPECT_GT(potential_curvature({1.0, 1.3}), 0.0);
    EXPECT_GT(potential_curvature({1.0, 1.7}), 0.0);
    EXPECT_NEAR(potential_curvature({1.0, 0.6}, PotentialConvention::FrequencySquared), -0.64, 1e-15);
}

TEST(Potential, RejectsNonFiniteAbscissa) {
    const std::vector<double> xs{0.0, INFINITY};
    EXPECT_THROW(potential_profile({1.0, 0.3}, xs), ParameterError);
}
