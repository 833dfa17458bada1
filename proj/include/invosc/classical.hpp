#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "invosc/errors.hpp"
#include "invosc/model.hpp"

namespace invosc::classical {

using cplx = std::complex<double>;

enum class Frame { Original, Transformed };

inline std::string to_string(Frame f) { return f == Frame::Original ? "original" : "transformed"; }

/// (x, p) in the original frame or (X, P) in the transformed one.
struct PhasePoint {
    cplx q;
    cplx mom;
    double t = 0.0;
    Frame frame = Frame::Original;
};

struct Trajectory {
    std::vector<PhasePoint> samples;
    double dt = 0.0;
    std::vector<cplx> hamiltonian_values;

    [[nodiscard]] double max_energy_drift() const {
        double drift = 0.0;
        for (const cplx& h : hamiltonian_values)
            drift = std::max(drift, std::abs(h - hamiltonian_values.front()));
        return drift;
    }
};

/// H(x, p) = Omega (p^2/2 - x^2/2) - i G x p.
inline cplx hamiltonian_value(cplx x, cplx p, const ModelParams& params) {
    return params.omega * (0.5 * p * p - 0.5 * x * x) - cplx{0.0, params.g} * x * p;
}

/// H'(X, P) = Gamma_I (P^2 - X^2)/2.
inline cplx transformed_hamiltonian_value(cplx X, cplx P, const ModelParams& params) {
    const EffectiveFrequency f = effective_frequency(params);
    if (f.regime != Regime::BelowEP)
        throw RegimeError("transformed Hamiltonian is defined below the exceptional point");
    return 0.5 * f.value * (P * P - X * X);
}

inline cplx frame_hamiltonian(const PhasePoint& s, const ModelParams& params) {
    return s.frame == Frame::Original ? hamiltonian_value(s.q, s.mom, params)
                                      : transformed_hamiltonian_value(s.q, s.mom, params);
}

/// Holomorphic Hamilton equations of H: dx/dt = Omega p - iGx, dp/dt = Omega x + iGp.
inline std::pair<cplx, cplx> equations_of_motion(const PhasePoint& state, const ModelParams& params) {
    if (state.frame != Frame::Original)
        throw FrameError("equations_of_motion expects an original-frame point");
    const cplx ig{0.0, params.g};
    return {params.omega * state.mom - ig * state.q, params.omega * state.q + ig * state.mom};
}

/// dX/dt = Gamma_I P, dP/dt = Gamma_I X.
inline std::pair<cplx, cplx> transformed_equations_of_motion(const PhasePoint& state, const ModelParams& params) {
    if (state.frame != Frame::Transformed)
        throw FrameError("transformed_equations_of_motion expects a transformed-frame point");
    const double gamma = effective_frequency(params).value;
    return {gamma * state.mom, gamma * state.q};
}

inline std::pair<cplx, cplx> frame_flow(const PhasePoint& s, const ModelParams& params) {
    return s.frame == Frame::Original ? equations_of_motion(s, params) : transformed_equations_of_motion(s, params);
}

/// Classical fourth-order Runge-Kutta on C^2, fixed step.
inline Trajectory integrate(const PhasePoint& initial, double dt, std::size_t steps, const ModelParams& params) {
    params.validate();
    if (!(dt > 0.0))
        throw ParameterError("integrate: dt must be positive");
    if (initial.frame == Frame::Transformed && classify_regime(params) != Regime::BelowEP)
        throw RegimeError("transformed-frame flow is defined below the exceptional point");
    Trajectory traj;
    traj.dt = dt;
    traj.samples.reserve(steps + 1);
    traj.hamiltonian_values.reserve(steps + 1);
    PhasePoint s = initial;
    traj.samples.push_back(s);
    traj.hamiltonian_values.push_back(frame_hamiltonian(s, params));
    auto shifted = [&](const PhasePoint& base, cplx dq, cplx dp, double h) {
        return PhasePoint{base.q + h * dq, base.mom + h * dp, base.t + h, base.frame};
    };
    for (std::size_t k = 0; k < steps; ++k) {
        const auto [q1, p1] = frame_flow(s, params);
        const auto [q2, p2] = frame_flow(shifted(s, q1, p1, 0.5 * dt), params);
        const auto [q3, p3] = frame_flow(shifted(s, q2, p2, 0.5 * dt), params);
        const auto [q4, p4] = frame_flow(shifted(s, q3, p3, dt), params);
        s.q += dt / 6.0 * (q1 + 2.0 * q2 + 2.0 * q3 + q4);
        s.mom += dt / 6.0 * (p1 + 2.0 * p2 + 2.0 * p3 + p4);
        // t from the step index keeps sample times exact multiples of dt
        s.t = initial.t + static_cast<double>(k + 1) * dt;
        if (!std::isfinite(s.q.real()) || !std::isfinite(s.q.imag()) || !std::isfinite(s.mom.real()) ||
            !std::isfinite(s.mom.imag()))
            throw StepError("integrate: state became non-finite at step " + std::to_string(k + 1));
        traj.samples.push_back(s);
        traj.hamiltonian_values.push_back(frame_hamiltonian(s, params));
    }
    return traj;
}

/// x = X cosh(eta/2) - i P sinh(eta/2), p = i X sinh(eta/2) + P cosh(eta/2).
inline std::pair<cplx, cplx> canonical_map(cplx X, cplx P, double eta) {
    const double c = std::cosh(0.5 * eta);
    const double s = std::sinh(0.5 * eta);
    const cplx i{0.0, 1.0};
    return {X * c - i * P * s, i * X * s + P * c};
}

/// Determinant of the linear map (X, P) -> (x, p): cosh^2 - (-i)(i) sinh^2 = 1.
inline cplx canonical_map_determinant(double eta) {
    const double c = std::cosh(0.5 * eta);
    const double s = std::sinh(0.5 * eta);
    const cplx i{0.0, 1.0};
    return c * c - (-i * s) * (i * s);
}

enum class GaugeForm {
    ClosedForm, ///< F = [(i/2)(P^2 - X^2) - XP] G / (2 Gamma_I) + XP/2
    Canonical,  ///< F = sinh^2(eta/2) XP + (i/4) sinh(eta) (X^2 - P^2), from the map itself
};

inline cplx gauge_function(cplx X, cplx P, const ModelParams& params) {
    const double gamma = effective_frequency(params).value;
    const cplx i{0.0, 1.0};
    return 0.5 * (0.5 * i * (P * P - X * X) - X * P) * (params.g / gamma) + 0.5 * X * P;
}

inline cplx canonical_gauge_function(cplx X, cplx P, double eta) {
    const double s = std::sinh(0.5 * eta);
    const cplx i{0.0, 1.0};
    return s * s * X * P + 0.25 * i * std::sinh(eta) * (X * X - P * P);
}

inline cplx gauge_value(GaugeForm form, cplx X, cplx P, const ModelParams& params, double eta) {
    return form == GaugeForm::ClosedForm ? gauge_function(X, P, params) : canonical_gauge_function(X, P, eta);
}

struct GaugeCheckRecord {
    PhasePoint point;
    cplx lhs;   ///< H(x(X,P), p(X,P))
    cplx rhs;   ///< Gamma_I (P^2 - X^2)/2
    cplx f_value;
    double residual = 0.0;
    double lagrangian_residual = 0.0; ///< |(L - L') - dF/dt| at the point, closed-form F
};

namespace detail {

/// Exact H' flow from (X, P) over time t.
inline std::pair<cplx, cplx> transformed_flow(cplx X, cplx P, double gamma, double t) {
    const double c = std::cosh(gamma * t);
    const double s = std::sinh(gamma * t);
    return {X * c + P * s, X * s + P * c};
}

inline cplx lagrangian_difference(cplx X, cplx P, cplx Xdot, cplx Pdot, const ModelParams& params, double eta) {
    const auto [x, p] = canonical_map(X, P, eta);
    const auto [xdot, pdot_unused] = canonical_map(Xdot, Pdot, eta);
    (void)pdot_unused;
    const double gamma = effective_frequency(params).value;
    const cplx l = xdot * p - hamiltonian_value(x, p, params);
    const cplx l_prime = Xdot * P - 0.5 * gamma * (P * P - X * X);
    return l - l_prime;
}

} // namespace detail

/// Compare H after the canonical map with Gamma_I (P^2 - X^2)/2. `eta_offset`
/// perturbs the similarity parameter (sensitivity guard).
inline GaugeCheckRecord gauge_equivalence(cplx X, cplx P, const ModelParams& params, double eta_offset = 0.0) {
    const double eta = eta_from_g(params) + eta_offset;
    const double gamma = effective_frequency(params).value;
    GaugeCheckRecord rec;
    rec.point = {X, P, 0.0, Frame::Transformed};
    const auto [x, p] = canonical_map(X, P, eta);
    rec.lhs = hamiltonian_value(x, p, params);
    rec.rhs = 0.5 * gamma * (P * P - X * X);
    rec.f_value = gauge_function(X, P, params);
    rec.residual = std::abs(rec.lhs - rec.rhs);

    constexpr double delta = 1e-4;
    const auto [Xf, Pf] = detail::transformed_flow(X, P, gamma, delta);
    const auto [Xb, Pb] = detail::transformed_flow(X, P, gamma, -delta);
    const cplx dF = (gauge_function(Xf, Pf, params) - gauge_function(Xb, Pb, params)) / (2.0 * delta);
    const cplx diff = detail::lagrangian_difference(X, P, gamma * P, gamma * X, params, eta);
    rec.lagrangian_residual = std::abs(diff - dF);
    return rec;
}

/// max over interior samples of |(L - L') - dF/dt| along a transformed-frame
/// trajectory; velocities come from the H' flow, dF/dt from central differences.
inline double lagrangian_gauge_residual(const Trajectory& traj, const ModelParams& params,
                                        GaugeForm form = GaugeForm::ClosedForm) {
    if (traj.samples.size() < 3)
        throw StepError("lagrangian_gauge_residual needs at least three samples");
    for (const PhasePoint& s : traj.samples)
        if (s.frame != Frame::Transformed)
            throw FrameError("lagrangian_gauge_residual expects a transformed-frame trajectory");
    const double eta = eta_from_g(params);
    const double gamma = effective_frequency(params).value;
    double worst = 0.0;
    for (std::size_t k = 1; k + 1 < traj.samples.size(); ++k) {
        const PhasePoint& prev = traj.samples[k - 1];
        const PhasePoint& cur = traj.samples[k];
        const PhasePoint& next = traj.samples[k + 1];
        const cplx dF = (gauge_value(form, next.q, next.mom, params, eta) - gauge_value(form, prev.q, prev.mom, params, eta)) /
                        (2.0 * traj.dt);
        const cplx diff =
            detail::lagrangian_difference(cur.q, cur.mom, gamma * cur.mom, gamma * cur.q, params, eta);
        const double r = std::abs(diff - dF);
        if (!std::isfinite(r))
            throw StepError("lagrangian_gauge_residual: non-finite value");
        worst = std::max(worst, r);
    }
    return worst;
}

} // namespace invosc::classical
