#include <cmath>
#include <complex>
#include <random>

#include <gtest/gtest.h>

#include "invosc/exact_eigenfunctions.hpp"

using namespace invosc::exact;
using C = std::complex<double>;

namespace {

GaussianRational gr(long long re, long long im = 0) { return {Rational(re), Rational(im)}; }

C eval_complex(const ComplexPolynomial& p, C z) {
    C acc{0.0, 0.0};
    for (auto it = p.coeffs().rbegin(); it != p.coeffs().rend(); ++it)
        acc = acc * z + it->to_complex();
    return acc;
}

// Floating oracle for the pairing of bra m with ket n: the integrand is entire and
// decays along x = e^{-i pi/4} y, where e^{-i x^2} becomes e^{-y^2}.
C contour_pairing(std::size_t m, std::size_t n) {
    const EigenfunctionHalf bra = generate_polynomial(HalfBranch::Bra, m);
    const EigenfunctionHalf ket = generate_polynomial(HalfBranch::Ket, n);
    const ComplexPolynomial integrand = bra.poly.conj() * ket.poly;
    const C rot = std::polar(1.0, -M_PI / 4.0);
    const double h = 0.005;
    C sum{0.0, 0.0};
    for (double y = -12.0; y <= 12.0 + 1e-12; y += h)
        sum += eval_complex(integrand, rot * y) * std::exp(-y * y);
    return std::conj(prefactor(bra)) * prefactor(ket) * rot * sum * h;
}

} // namespace

TEST(GaussianRational, ArithmeticAndFormatting) {
    const GaussianRational a(Rational(1, 2), Rational(-3, 4));
    EXPECT_EQ(to_string(a), "1/2-3/4i");
    EXPECT_EQ(to_string(gr(4)), "4");
    EXPECT_EQ(to_string(gr(0, 2)), "2i");
    EXPECT_EQ(to_string(gr(0, -1)), "-i");
    EXPECT_EQ(to_string(gr(0)), "0");
    EXPECT_EQ(a * a.conj(), GaussianRational(a.norm_sq()));
    EXPECT_EQ(gr(0, 1) * gr(0, 1), gr(-1));
    EXPECT_EQ((a / a), gr(1));
    EXPECT_THROW(a / gr(0), std::domain_error);
}

TEST(Polynomial, LowMembers) {
    EXPECT_EQ(generate_polynomial(HalfBranch::Ket, 0).poly, ComplexPolynomial({gr(1)}));
    EXPECT_EQ(generate_polynomial(HalfBranch::Ket, 1).poly, ComplexPolynomial({gr(0), gr(2)}));
    EXPECT_EQ(generate_polynomial(HalfBranch::Ket, 2).poly, ComplexPolynomial({gr(0, 2), gr(0), gr(4)}));
    EXPECT_EQ(generate_polynomial(HalfBranch::Ket, 3).poly, ComplexPolynomial({gr(0), gr(0, 12), gr(0), gr(8)}));
}

TEST(Polynomial, DegreeLeadingCoefficientAndConjugateSymmetry) {
    for (std::size_t n = 0; n <= 14; ++n) {
        const auto ket = generate_polynomial(HalfBranch::Ket, n);
        const auto bra = generate_polynomial(HalfBranch::Bra, n);
        EXPECT_EQ(ket.poly.degree(), static_cast<int>(n));
        EXPECT_EQ(ket.poly.leading(), GaussianRational(Rational(BigInt(1) << n)));
        EXPECT_EQ(bra.poly.leading(), ket.poly.leading());
        EXPECT_EQ(bra.poly, ket.poly.conj());
        // parity
        for (std::size_t k = 0; k <= n; ++k)
            if ((n - k) % 2 == 1) {
                EXPECT_TRUE(ket.poly.coeff(k).is_zero());
            }
    }
}

TEST(Polynomial, KetsMatchHermiteAtImaginaryArgument) {
    // P_n(x) = (-i)^{n}... checked numerically against H_n via the generating recurrence
    // H_{n+1}(y) = 2y H_n(y) - 2n H_{n-1}(y) with y = e^{i pi/4} x scaled: P_n(x) = e^{-i n pi/4} H_n(e^{i pi/4} x).
    const C w = std::polar(1.0, M_PI / 4.0);
    for (double x : {-1.3, 0.0, 0.4, 2.2}) {
        C h_prev{1.0, 0.0};
        C h = 2.0 * w * x;
        for (std::size_t n = 1; n <= 10; ++n) {
            const C expected = std::pow(std::conj(w), static_cast<double>(n)) * h;
            const C got = generate_polynomial(HalfBranch::Ket, n).poly.evaluate(x);
            EXPECT_NEAR(std::abs(got - expected), 0.0, 1e-9 * std::max(1.0, std::abs(expected))) << n << " " << x;
            const C next = 2.0 * w * x * h - 2.0 * static_cast<double>(n) * h_prev;
            h_prev = h;
            h = next;
        }
    }
}

TEST(Moments, ClosedFormValues) {
    EXPECT_EQ(fresnel_moment(0), gr(1));
    EXPECT_EQ(fresnel_moment(1), GaussianRational(Rational(0), Rational(-1, 2)));
    EXPECT_EQ(fresnel_moment(2), GaussianRational(Rational(-3, 4)));
    const MomentTable t(6);
    EXPECT_TRUE(t.moment(3).is_zero());
    for (std::size_t k = 0; k < 6; ++k)
        EXPECT_EQ(t.even(k), fresnel_moment(k));
}

TEST(Moments, AgreeWithGammaFunctionContinuation) {
    // integral x^{2k} e^{-a x^2} = Gamma(k + 1/2) a^{-(k+1/2)}; at a = i, in units of sqrt(pi/i).
    for (std::size_t k = 0; k < 10; ++k) {
        const double kk = static_cast<double>(k);
        const C expected = std::tgamma(kk + 0.5) / std::tgamma(0.5) * std::pow(C{0.0, 1.0}, -kk);
        EXPECT_NEAR(std::abs(fresnel_moment(k).to_complex() - expected), 0.0, 1e-12 * std::abs(expected));
    }
}

TEST(InnerProduct, LowestPairs) {
    const auto v00 = inner_product(0, 0);
    EXPECT_EQ(v00.coeff, gr(1));
    EXPECT_EQ(v00.radicand, 1);
    EXPECT_TRUE(inner_product(0, 1).coeff.is_zero());
}

TEST(InnerProduct, ExactKroneckerDeltaUpToTwelve) {
    for (std::size_t m = 0; m <= 12; ++m)
        for (std::size_t n = 0; n <= 12; ++n) {
            const RadicalValue v = inner_product(m, n);
            if (m == n) {
                EXPECT_EQ(v.coeff, gr(1)) << m;
                EXPECT_TRUE(v.is_rational());
            } else {
                EXPECT_TRUE(v.coeff.is_zero()) << m << "," << n;
            }
        }
}

TEST(InnerProduct, AgreesWithContourQuadrature) {
    for (std::size_t m = 0; m <= 6; ++m)
        for (std::size_t n = 0; n <= 6; ++n) {
            const C oracle = contour_pairing(m, n);
            EXPECT_NEAR(std::abs(oracle - inner_product(m, n).to_complex()), 0.0, 1e-10) << m << "," << n;
        }
}

TEST(Ladder, ActionOnLowStates) {
    const LadderCheck c0 = ladder_action_check(0);
    EXPECT_TRUE(c0.lower_matches);
    EXPECT_TRUE(c0.raise_matches);
    EXPECT_EQ(c0.raise_factor_sq, gr(1));

    const LadderCheck c1 = ladder_action_check(1);
    EXPECT_TRUE(c1.lower_matches);
    EXPECT_EQ(c1.lower_factor_sq, gr(1));
    EXPECT_TRUE(c1.raise_matches);
    EXPECT_EQ(c1.raise_factor_sq, gr(2));
}

TEST(Ladder, AllBranchesUpToTen) {
    for (std::size_t n = 0; n <= 10; ++n) {
        const LadderCheck c = ladder_action_check(n);
        EXPECT_TRUE(c.lower_matches) << n;
        EXPECT_TRUE(c.raise_matches) << n;
        EXPECT_TRUE(c.bra_lower_matches) << n;
        EXPECT_TRUE(c.bra_raise_matches) << n;
    }
}

TEST(Evaluate, GroundStateModulusAndPhase) {
    const auto g = generate_polynomial(HalfBranch::Ket, 0);
    const C v0 = evaluate(g, 0.0, 1.0);
    EXPECT_NEAR(std::abs(v0), std::pow(M_PI, -0.25), 1e-15);
    EXPECT_NEAR(std::arg(v0), M_PI / 8.0, 1e-15);
    for (double x : {-3.0, 0.5, 7.0})
        EXPECT_NEAR(std::abs(evaluate(g, x, 1.0)), std::pow(M_PI, -0.25), 1e-14);
    EXPECT_NEAR(std::abs(evaluate(generate_polynomial(HalfBranch::Ket, 1), 0.0, 1.0)), 0.0, 1e-15);
    EXPECT_THROW(evaluate(g, 0.0, 0.0), invosc::ParameterError);
}

TEST(Evaluate, FrequencyScaling) {
    const auto k2 = generate_polynomial(HalfBranch::Ket, 2);
    const double f = 0.64;
    for (double x : {-1.0, 0.3, 2.0})
        EXPECT_NEAR(std::abs(evaluate(k2, x, f) - evaluate(k2, std::sqrt(f) * x, 1.0) * std::pow(f, 0.25)), 0.0, 1e-14);
}

TEST(Evaluate, SatisfiesEigenvalueEquationByFiniteDifferences) {
    // H0 = (p^2 - x^2)/2 on psi_r,n gives i(n + 1/2) psi_r,n.
    const double h = 1e-3;
    for (std::size_t n = 0; n <= 4; ++n) {
        const auto ket = generate_polynomial(HalfBranch::Ket, n);
        for (double x : {-0.7, 0.2, 1.1}) {
            const C d2 = (evaluate(ket, x + h, 1.0) - 2.0 * evaluate(ket, x, 1.0) + evaluate(ket, x - h, 1.0)) / (h * h);
            const C hpsi = -0.5 * d2 - 0.5 * x * x * evaluate(ket, x, 1.0);
            const C expected = C{0.0, static_cast<double>(n) + 0.5} * evaluate(ket, x, 1.0);
            EXPECT_NEAR(std::abs(hpsi - expected), 0.0, 1e-5) << n << " " << x;
        }
    }
}

TEST(Density, GroundStateHasConstantModulus) {
    for (double x : {-2.0, 0.0, 0.9, 5.0})
        EXPECT_NEAR(std::abs(density(0, x, 1.0)), 1.0 / std::sqrt(M_PI), 1e-14);
    EXPECT_NEAR(std::abs(density(1, 0.0, 1.0)), 0.0, 1e-15);
}

TEST(Density, DualIsConjugate) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-4.0, 4.0);
    for (int k = 0; k < 20; ++k) {
        const double x = u(rng);
        for (std::size_t n : {0u, 2u, 5u})
            EXPECT_NEAR(std::abs(density_dual(n, x, 1.0) - std::conj(density(n, x, 1.0))), 0.0, 1e-13);
    }
}
