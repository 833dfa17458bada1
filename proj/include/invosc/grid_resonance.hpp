#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "invosc/errors.hpp"
#include "invosc/fock_ops.hpp"
#include "invosc/model.hpp"
#include "invosc/spectra.hpp"

namespace invosc {

enum class Stencil { Central2, Central4, Spectral };

inline std::string to_string(Stencil s) {
    switch (s) {
    case Stencil::Central2: return "central2";
    case Stencil::Central4: return "central4";
    case Stencil::Spectral: return "spectral";
    }
    return "unknown";
}

/// Uniform grid on [x_min, x_max] (both ends are nodes; the function is taken to
/// vanish outside), with complex-scaling angle theta.
struct GridSpec {
    double x_min = -12.0;
    double x_max = 12.0;
    std::size_t points = 801;
    double theta = -std::numbers::pi / 4.0;
    Stencil stencil = Stencil::Central4;

    void validate() const {
        if (!(x_min < x_max))
            throw ParameterError("GridSpec: x_min must be below x_max");
        if (points < 64)
            throw DimensionError("GridSpec: at least 64 points required");
        if (!(std::abs(theta) <= std::numbers::pi / 2.0))
            throw ParameterError("GridSpec: |theta| must not exceed pi/2");
    }
    [[nodiscard]] double spacing() const { return (x_max - x_min) / static_cast<double>(points - 1); }
    [[nodiscard]] Eigen::VectorXd nodes() const {
        return Eigen::VectorXd::LinSpaced(static_cast<Eigen::Index>(points), x_min, x_max);
    }
};

namespace detail {

/// Real antisymmetric first-derivative matrix.
inline Eigen::MatrixXd first_derivative(const GridSpec& spec) {
    const auto n = static_cast<Eigen::Index>(spec.points);
    const double h = spec.spacing();
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
    switch (spec.stencil) {
    case Stencil::Central2:
        for (Eigen::Index j = 0; j + 1 < n; ++j) {
            d(j, j + 1) = 0.5 / h;
            d(j + 1, j) = -0.5 / h;
        }
        break;
    case Stencil::Central4:
        for (Eigen::Index j = 0; j < n; ++j) {
            if (j + 1 < n) {
                d(j, j + 1) = 8.0 / (12.0 * h);
                d(j + 1, j) = -8.0 / (12.0 * h);
            }
            if (j + 2 < n) {
                d(j, j + 2) = -1.0 / (12.0 * h);
                d(j + 2, j) = 1.0 / (12.0 * h);
            }
        }
        break;
    case Stencil::Spectral:
        for (Eigen::Index j = 0; j < n; ++j)
            for (Eigen::Index k = 0; k < n; ++k)
                if (j != k) {
                    const auto diff = static_cast<double>(j - k);
                    d(j, k) = ((j - k) % 2 == 0 ? 1.0 : -1.0) / (diff * h);
                }
        break;
    }
    return d;
}

/// Real symmetric second-derivative matrix.
inline Eigen::MatrixXd second_derivative(const GridSpec& spec) {
    const auto n = static_cast<Eigen::Index>(spec.points);
    const double h2 = spec.spacing() * spec.spacing();
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
    switch (spec.stencil) {
    case Stencil::Central2:
        for (Eigen::Index j = 0; j < n; ++j) {
            d(j, j) = -2.0 / h2;
            if (j + 1 < n)
                d(j, j + 1) = d(j + 1, j) = 1.0 / h2;
        }
        break;
    case Stencil::Central4:
        for (Eigen::Index j = 0; j < n; ++j) {
            d(j, j) = -30.0 / (12.0 * h2);
            if (j + 1 < n)
                d(j, j + 1) = d(j + 1, j) = 16.0 / (12.0 * h2);
            if (j + 2 < n)
                d(j, j + 2) = d(j + 2, j) = -1.0 / (12.0 * h2);
        }
        break;
    case Stencil::Spectral: {
        const double pi2 = std::numbers::pi * std::numbers::pi;
        for (Eigen::Index j = 0; j < n; ++j)
            for (Eigen::Index k = 0; k < n; ++k) {
                if (j == k) {
                    d(j, k) = -pi2 / (3.0 * h2);
                } else {
                    const auto diff = static_cast<double>(j - k);
                    d(j, k) = -2.0 * ((j - k) % 2 == 0 ? 1.0 : -1.0) / (diff * diff * h2);
                }
            }
        break;
    }
    }
    return d;
}

} // namespace detail

struct GridOperators {
    TruncatedOperator x;
    TruncatedOperator p;          ///< -i d/dx
    TruncatedOperator p_squared;  ///< -d^2/dx^2 (direct stencil, not p*p)
};

inline GridOperators build_grid_operators(const GridSpec& spec) {
    spec.validate();
    const Eigen::VectorXd nodes = spec.nodes();
    Matrix x = nodes.cast<cplx>().asDiagonal();
    Matrix p = -I_UNIT * detail::first_derivative(spec).cast<cplx>();
    Matrix p2 = (-detail::second_derivative(spec)).cast<cplx>();
    return {{std::move(x), Basis::PositionGrid}, {std::move(p), Basis::PositionGrid}, {std::move(p2), Basis::PositionGrid}};
}

struct GridXP {
    TruncatedOperator x;
    TruncatedOperator p;
};

inline GridXP build_grid_xp(const GridSpec& spec) {
    GridOperators ops = build_grid_operators(spec);
    return {std::move(ops.x), std::move(ops.p)};
}

struct GridSU11 {
    TruncatedOperator s_z;
    TruncatedOperator s_plus;
    TruncatedOperator s_minus;
};

/// SU(1,1) generators on the grid in symmetric ordering:
/// S_z = (i/4)(x^2 - p^2), S+ = (i/4)(x - p)^2, S- = (i/4)(x + p)^2.
/// These equal (b+ b- + 1/2)/2, (b+)^2/2, (b-)^2/2 once [x, p] = i is used, but stay
/// exactly anti-Hermitian for finite matrices.
inline GridSU11 build_grid_su11(const GridOperators& ops) {
    // x is diagonal: products with it are row or column scalings
    const auto xd = ops.x.entries().diagonal();
    const Matrix x2 = xd.cwiseAbs2().cast<cplx>().asDiagonal();
    const Matrix xp_px = xd.asDiagonal() * ops.p.entries() + ops.p.entries() * xd.asDiagonal();
    const TruncatedOperator x2_op{x2, Basis::PositionGrid};
    const TruncatedOperator xp_px_op{xp_px, Basis::PositionGrid};
    const cplx quarter_i = 0.25 * I_UNIT;
    return {quarter_i * (x2_op - ops.p_squared), quarter_i * (x2_op - xp_px_op + ops.p_squared),
            quarter_i * (x2_op + xp_px_op + ops.p_squared)};
}

namespace detail {

inline TruncatedOperator grid_h0(double omega, const GridOperators& ops) {
    Matrix h0 = ops.p_squared.entries();
    h0.diagonal() -= ops.x.entries().diagonal().cwiseAbs2().cast<cplx>();
    return {0.5 * omega * h0, Basis::PositionGrid};
}

} // namespace detail

/// H(G) = Omega (p^2 - x^2)/2 + G (S+ - S-) on the grid.
inline TruncatedOperator build_grid_hamiltonian(const ModelParams& params, const GridOperators& ops) {
    params.validate();
    const GridSU11 su = build_grid_su11(ops);
    return detail::grid_h0(params.omega, ops) + params.g * (su.s_plus - su.s_minus);
}

struct HermiticityReport {
    double h0_defect = 0.0;          ///< ||H0 - H0^H||_F
    double h0_norm = 0.0;
    double sz_defect = 0.0;          ///< ||S_z + S_z^H||_F
    double sz_norm = 0.0;
    double s_plus_defect = 0.0;      ///< ||S+ + S+^H||_F
    double s_plus_norm = 0.0;
    double s_minus_defect = 0.0;
    double s_minus_norm = 0.0;
    double h_defect = 0.0;           ///< ||H(G) - H(G)^H||_F
    double h_expected = 0.0;         ///< 2 G ||S+ - S-||_F
};

inline HermiticityReport hermiticity_report(const ModelParams& params, const GridSpec& spec) {
    params.validate();
    const GridOperators ops = build_grid_operators(spec);
    const GridSU11 su = build_grid_su11(ops);
    const TruncatedOperator h0 = detail::grid_h0(params.omega, ops);
    const TruncatedOperator h = h0 + params.g * (su.s_plus - su.s_minus);
    HermiticityReport r;
    r.h0_defect = (h0 - h0.adjoint()).norm();
    r.h0_norm = h0.norm();
    r.sz_defect = (su.s_z + su.s_z.adjoint()).norm();
    r.sz_norm = su.s_z.norm();
    r.s_plus_defect = (su.s_plus + su.s_plus.adjoint()).norm();
    r.s_plus_norm = su.s_plus.norm();
    r.s_minus_defect = (su.s_minus + su.s_minus.adjoint()).norm();
    r.s_minus_norm = su.s_minus.norm();
    r.h_defect = (h - h.adjoint()).norm();
    r.h_expected = 2.0 * params.g * (su.s_plus - su.s_minus).norm();
    return r;
}

/// Eigenvalues of the self-adjoint grid truncation of Omega (p^2 - x^2)/2 via the
/// general complex solver (to show they come out real without being forced to).
inline std::vector<cplx> grid_inverted_well_spectrum(double omega, const GridSpec& spec) {
    const GridOperators ops = build_grid_operators(spec);
    return eigenvalues(detail::grid_h0(omega, ops));
}

struct ResonanceResult {
    std::vector<cplx> eigenvalues;
    std::vector<cplx> targets;
    std::vector<double> deviations;
    std::vector<std::string> warnings;
};

/// Diagonalize the complex-scaled inverted well Omega/2 (e^{-2i theta} p^2 - e^{2i theta} x^2).
/// At theta = -pi/4 this is i*Omega(p^2 + x^2)/2, whose eigenvalues are +i Omega(n + 1/2)
/// (ket branch); theta = +pi/4 gives the bra branch -i Omega(n + 1/2).
inline ResonanceResult complex_scaled_spectrum(double omega, const GridSpec& spec, std::size_t levels) {
    spec.validate();
    if (!(omega > 0.0))
        throw ParameterError("complex_scaled_spectrum: omega must be positive");
    if (levels == 0 || levels > 8)
        throw ParameterError("complex_scaled_spectrum: levels must be in [1, 8]");

    ResonanceResult out;
    const double reach = std::min(std::abs(spec.x_min), std::abs(spec.x_max));
    const double needed = std::sqrt(2.0 * static_cast<double>(levels) + 1.0) + 6.0;
    if (spec.x_min >= 0.0 || spec.x_max <= 0.0 || reach < needed)
        out.warnings.push_back("DomainWarning: box [" + std::to_string(spec.x_min) + ", " +
                               std::to_string(spec.x_max) + "] is small for " + std::to_string(levels) +
                               " levels (need |x| >= " + std::to_string(needed) + ")");

    const cplx kinetic_phase = std::exp(-2.0 * I_UNIT * spec.theta);
    const cplx potential_phase = std::exp(2.0 * I_UNIT * spec.theta);
    const Eigen::MatrixXd p2 = -detail::second_derivative(spec);
    const Eigen::VectorXd nodes = spec.nodes();
    Eigen::MatrixXd x2 = Eigen::MatrixXd::Zero(p2.rows(), p2.cols());
    x2.diagonal() = nodes.array().square().matrix();

    std::vector<cplx> values;
    if (std::abs(potential_phase + kinetic_phase) < 1e-14) {
        // Pure rotation: A = kinetic_phase * Omega/2 * (p^2 + x^2), a phase times a real symmetric matrix.
        const Eigen::MatrixXd sym = 0.5 * omega * (p2 + x2);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym, Eigen::EigenvaluesOnly);
        if (solver.info() != Eigen::Success)
            throw ConvergenceError("complex_scaled_spectrum: symmetric solver failed");
        for (Eigen::Index k = 0; k < solver.eigenvalues().size(); ++k)
            values.push_back(kinetic_phase * solver.eigenvalues()(k));
        std::stable_sort(values.begin(), values.end(),
                         [](cplx a, cplx b) { return std::abs(a) < std::abs(b); });
    } else {
        const Matrix a = 0.5 * omega * (kinetic_phase * p2.cast<cplx>() - potential_phase * x2.cast<cplx>());
        values = eigenvalues(a);
    }

    const double branch = spec.theta <= 0.0 ? 1.0 : -1.0;
    for (std::size_t n = 0; n < levels; ++n) {
        const cplx target = branch * I_UNIT * omega * (static_cast<double>(n) + 0.5);
        out.eigenvalues.push_back(values[n]);
        out.targets.push_back(target);
        out.deviations.push_back(std::abs(values[n] - target));
    }
    return out;
}

} // namespace invosc
