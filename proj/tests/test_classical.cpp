#include <cmath>
#include <complex>
#include <random>

#include <gtest/gtest.h>

#include "invosc/classical.hpp"

using namespace invosc;
using namespace invosc::classical;

TEST(Hamiltonian, PointValues) {
    const ModelParams p{1.0, 0.6};
    EXPECT_EQ(hamiltonian_value(0.0, 1.0, p), cplx(0.5));
    EXPECT_EQ(hamiltonian_value(1.0, 0.0, p), cplx(-0.5));
    const double r = 2.0 * std::sqrt(2.0);
    EXPECT_NEAR(std::abs(hamiltonian_value(3.0 / r, cplx(0.0, 1.0 / r), p) - cplx(-0.4)), 0.0, 1e-15);
}

TEST(EquationsOfMotion, Values) {
    const auto [dx, dp] = equations_of_motion({0.0, 2.0}, {1.0, 0.0});
    EXPECT_EQ(dx, cplx(2.0));
    EXPECT_EQ(dp, cplx(0.0));
    const auto [dx2, dp2] = equations_of_motion({1.0, 0.0}, {1.0, 0.6});
    EXPECT_NEAR(std::abs(dx2 - cplx(0.0, -0.6)), 0.0, 1e-15);
    EXPECT_EQ(dp2, cplx(1.0));
    EXPECT_THROW(equations_of_motion({1.0, 0.0, 0.0, Frame::Transformed}, {1.0, 0.6}), FrameError);
}

TEST(EquationsOfMotion, MatchHamiltonGradientsAndAreDivergenceFree) {
    // Holomorphic derivatives by complex-step finite differences.
    const ModelParams p{1.3, 0.45};
    const cplx x{0.3, -0.2};
    const cplx mom{-0.7, 0.4};
    const double h = 1e-6;
    const cplx dhdp = (hamiltonian_value(x, mom + h, p) - hamiltonian_value(x, mom - h, p)) / (2.0 * h);
    const cplx dhdx = (hamiltonian_value(x + h, mom, p) - hamiltonian_value(x - h, mom, p)) / (2.0 * h);
    const auto [dx, dp] = equations_of_motion({x, mom}, p);
    EXPECT_NEAR(std::abs(dx - dhdp), 0.0, 1e-9);
    EXPECT_NEAR(std::abs(dp + dhdx), 0.0, 1e-9);
    // d(dx/dt)/dx + d(dp/dt)/dp
    const auto [ax, ap] = equations_of_motion({x + h, mom}, p);
    const auto [bx, bp] = equations_of_motion({x, mom + h}, p);
    const cplx div = (ax - dx) / h + (bp - dp) / h;
    EXPECT_NEAR(std::abs(div), 0.0, 1e-8);
    (void)ap;
    (void)bx;
}

TEST(Integrate, InvertedWellOrbit) {
    const auto tr = integrate({0.0, 1.0}, 1e-3, 3000, {1.0, 0.0});
    EXPECT_NEAR(tr.samples.back().t, 3.0, 1e-12);
    EXPECT_NEAR(tr.samples.back().q.real(), 10.01787, 1e-5);
    EXPECT_LT(std::abs(tr.samples.back().q - std::sinh(3.0)) / std::sinh(3.0), 1e-8);
    EXPECT_LT(tr.max_energy_drift(), 1e-10);
}

TEST(Integrate, FrequencyScaling) {
    // x(t) = (v0/omega) sinh(omega t) with v0 = omega p0.
    const auto tr = integrate({0.0, 0.5}, 1e-3, 1000, {2.0, 0.0});
    EXPECT_NEAR(tr.samples.back().q.real(), std::sinh(2.0) / 2.0, 1e-9);
    EXPECT_NEAR(std::sinh(2.0) / 2.0, 1.813430, 1e-6);
}

TEST(Integrate, EnergyConservedWithCoupling) {
    const auto tr = integrate({0.4, -0.2}, 1e-3, 3000, {1.0, 0.6});
    EXPECT_LT(tr.max_energy_drift(), 1e-10);
}

TEST(Integrate, FourthOrderConvergence) {
    auto err = [](double dt) {
        const auto tr = integrate({0.0, 1.0}, dt, static_cast<std::size_t>(std::llround(2.0 / dt)), {1.0, 0.0});
        return std::abs(tr.samples.back().q - std::sinh(2.0));
    };
    EXPECT_NEAR(std::log2(err(0.02) / err(0.01)), 4.0, 0.1);
}

TEST(Integrate, RealDataDevelopsImaginaryPart) {
    const double g = 0.6;
    const double dt = 1e-4;
    const auto tr = integrate({1.0, 0.0}, dt, 1, {1.0, g});
    EXPECT_NEAR(tr.samples[1].q.imag(), -g * 1.0 * dt, 1e-10);
}

TEST(Integrate, Guards) {
    EXPECT_THROW(integrate({0.0, 1.0}, 0.0, 10, {1.0, 0.0}), ParameterError);
    EXPECT_THROW(integrate({0.0, 1.0, 0.0, Frame::Transformed}, 1e-3, 10, {1.0, 1.2}), RegimeError);
    EXPECT_THROW(integrate({0.0, 1.0}, 1.0, 2000, {1.0, 0.0}), StepError);
}

TEST(Integrate, TransformedFlowMatchesClosedForm) {
    const ModelParams p{1.0, 0.6};
    const auto tr = integrate({0.5, 0.3, 0.0, Frame::Transformed}, 1e-3, 1000, p);
    const double gamma = 0.8;
    const double t = tr.samples.back().t;
    EXPECT_NEAR(std::abs(tr.samples.back().q - (0.5 * std::cosh(gamma * t) + 0.3 * std::sinh(gamma * t))), 0.0, 1e-12);
    EXPECT_EQ(tr.samples.back().frame, Frame::Transformed);
}

TEST(CanonicalMap, IdentityAndKnownPoint) {
    const auto [x, p] = canonical_map(cplx(0.3, 0.1), cplx(-0.2, 0.5), 0.0);
    EXPECT_EQ(x, cplx(0.3, 0.1));
    EXPECT_EQ(p, cplx(-0.2, 0.5));
    const double r = 2.0 * std::sqrt(2.0);
    const auto [x2, p2] = canonical_map(1.0, 0.0, std::log(2.0));
    EXPECT_NEAR(std::abs(x2 - 3.0 / r), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(p2 - cplx(0.0, 1.0 / r)), 0.0, 1e-15);
}

TEST(CanonicalMap, UnitJacobianAndBracket) {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int k = 0; k < 50; ++k) {
        const double eta = u(rng);
        EXPECT_NEAR(std::abs(canonical_map_determinant(eta) - 1.0), 0.0, 1e-12);
        // {x, p} from the images of the unit vectors
        const auto [xX, pX] = canonical_map(1.0, 0.0, eta);
        const auto [xP, pP] = canonical_map(0.0, 1.0, eta);
        EXPECT_NEAR(std::abs(xX * pP - xP * pX - 1.0), 0.0, 1e-12);
    }
}

TEST(Gauge, WorkedExamples) {
    const ModelParams p{1.0, 0.6};
    auto r = gauge_equivalence(1.0, 0.0, p);
    EXPECT_NEAR(std::abs(r.lhs - cplx(-0.4)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(r.rhs - cplx(-0.4)), 0.0, 1e-15);
    EXPECT_LT(r.residual, 1e-15);
    r = gauge_equivalence(0.0, 1.0, p);
    EXPECT_NEAR(std::abs(r.lhs - cplx(0.4)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(r.rhs - cplx(0.4)), 0.0, 1e-15);
    EXPECT_THROW(gauge_equivalence(1.0, 0.0, {1.0, 1.0}), RegimeError);
}

TEST(Gauge, RandomPointsAndSensitivity) {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto disk = [&] { return std::polar(std::sqrt(u(rng)), 2.0 * M_PI * u(rng)); };
    for (double g : {0.2, 0.6, 0.95}) {
        const ModelParams p{1.0, g};
        double worst = 0.0;
        double perturbed = 0.0;
        for (int k = 0; k < 1000; ++k) {
            const cplx X = disk();
            const cplx P = disk();
            worst = std::max(worst, gauge_equivalence(X, P, p).residual);
            perturbed = std::max(perturbed, gauge_equivalence(X, P, p, 1e-3).residual);
        }
        EXPECT_LT(worst, 1e-12) << g;
        EXPECT_GT(perturbed, 1e-4) << g;
    }
}

TEST(Gauge, ClosedFormLagrangianResidualAtPoint) {
    const auto r = gauge_equivalence(cplx(0.5, 0.1), cplx(0.3, -0.2), {1.0, 0.6});
    EXPECT_LT(r.lagrangian_residual, 1e-8);
}

TEST(LagrangianGauge, ResidualAndSecondOrderRefinement) {
    const ModelParams p{1.0, 0.6};
    auto residual = [&](double dt) {
        const auto tr = integrate({0.5, 0.3, 0.0, Frame::Transformed}, dt, static_cast<std::size_t>(std::llround(2.0 / dt)), p);
        return lagrangian_gauge_residual(tr, p);
    };
    const double r1 = residual(1e-3);
    const double r2 = residual(5e-4);
    EXPECT_LT(r1, 1e-6);
    EXPECT_NEAR(std::log2(r1 / r2), 2.0, 0.1);
}

TEST(LagrangianGauge, CanonicalFormWorksForEveryCoupling) {
    for (double g : {0.0, 0.3, 0.6, 0.9}) {
        const ModelParams p{1.0, g};
        const auto tr = integrate({0.5, 0.3, 0.0, Frame::Transformed}, 1e-3, 2000, p);
        EXPECT_LT(lagrangian_gauge_residual(tr, p, GaugeForm::Canonical), 1e-6) << g;
    }
    const ModelParams p0{1.0, 0.0};
    const auto tr0 = integrate({0.5, 0.3, 0.0, Frame::Transformed}, 1e-3, 2000, p0);
    EXPECT_LT(lagrangian_gauge_residual(tr0, p0, GaugeForm::Canonical), 1e-14);
}

TEST(LagrangianGauge, ClosedFormOnlyHoldsAtThreeFifths) {
    const ModelParams p{1.0, 0.3};
    const auto tr = integrate({0.5, 0.3, 0.0, Frame::Transformed}, 1e-3, 2000, p);
    EXPECT_GT(lagrangian_gauge_residual(tr, p, GaugeForm::ClosedForm), 1e-2);
}

TEST(LagrangianGauge, Guards) {
    const ModelParams p{1.0, 0.6};
    const auto original = integrate({0.5, 0.3}, 1e-3, 10, p);
    EXPECT_THROW(lagrangian_gauge_residual(original, p), FrameError);
    const auto short_tr = integrate({0.5, 0.3, 0.0, Frame::Transformed}, 1e-3, 1, p);
    EXPECT_THROW(lagrangian_gauge_residual(short_tr, p), StepError);
}
