#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "invosc/errors.hpp"

namespace invosc {

/// Physical parameters in the dimensionless hbar = 1 convention.
///
/// `omega` is the slope frequency of the inverted well, `g` the strength of the
/// non-Hermitian SU(1,1) coupling, `truncation` the Fock dimension used by the
/// matrix builders and `tol` the tolerance for regime decisions.
struct ModelParams {
    double omega = 1.0;
    double g = 0.0;
    std::size_t truncation = 128;
    double tol = 1e-9;

    void validate() const {
        if (!(omega > 0.0) || !std::isfinite(omega))
            throw ParameterError("omega must be positive and finite");
        if (!(g >= 0.0) || !std::isfinite(g))
            throw ParameterError("g must be non-negative and finite");
        if (truncation < 4)
            throw ParameterError("truncation must be at least 4");
        if (!(tol > 0.0))
            throw ParameterError("tol must be positive");
    }

    [[nodiscard]] ModelParams with_g(double new_g) const {
        ModelParams copy = *this;
        copy.g = new_g;
        return copy;
    }

    [[nodiscard]] ModelParams with_truncation(std::size_t n) const {
        ModelParams copy = *this;
        copy.truncation = n;
        return copy;
    }
};

enum class Regime { BelowEP, AtEP, AboveEP };

inline std::string to_string(Regime r) {
    switch (r) {
    case Regime::BelowEP: return "below_ep";
    case Regime::AtEP: return "at_ep";
    case Regime::AboveEP: return "above_ep";
    }
    return "unknown";
}

/// sqrt|omega^2 - g^2| tagged with the side of the exceptional point it lives on.
/// Below the EP this is the imaginary-frequency slope Gamma_I, above it the real
/// oscillator frequency Gamma.
struct EffectiveFrequency {
    Regime regime = Regime::BelowEP;
    double value = 0.0;
};

inline Regime classify_regime(const ModelParams& params) {
    if (std::abs(params.omega - params.g) <= params.tol * params.omega)
        return Regime::AtEP;
    return params.g < params.omega ? Regime::BelowEP : Regime::AboveEP;
}

inline EffectiveFrequency effective_frequency(const ModelParams& params) {
    params.validate();
    const Regime regime = classify_regime(params);
    if (regime == Regime::AtEP)
        return {regime, 0.0};
    // (omega - g)(omega + g) keeps full relative precision near the EP.
    const double product = (params.omega - params.g) * (params.omega + params.g);
    return {regime, std::sqrt(std::abs(product))};
}

/// Exceptional coupling G_c.
inline double exceptional_coupling(double omega) { return omega; }

/// Positive-branch similarity parameter: sinh(eta) = g / sqrt(omega^2 - g^2),
/// equivalently tanh(eta) = g / omega. Defined strictly below the EP only.
inline double eta_from_g(const ModelParams& params) {
    params.validate();
    if (classify_regime(params) != Regime::BelowEP)
        throw RegimeError("real similarity parameter exists only below the exceptional point (g < omega)");
    return std::atanh(params.g / params.omega);
}

enum class PotentialConvention {
    Frequency,        ///< V = -/+ (1/2) * freq * x^2
    FrequencySquared, ///< V = -/+ (1/2) * freq^2 * x^2
};

struct PotentialSample {
    double x = 0.0;
    double v = 0.0;
};

/// Curvature of the transformed potential: negative below the EP, zero at it,
/// positive beyond.
inline double potential_curvature(const ModelParams& params,
                                  PotentialConvention convention = PotentialConvention::Frequency) {
    const EffectiveFrequency f = effective_frequency(params);
    const double magnitude = convention == PotentialConvention::Frequency ? f.value : f.value * f.value;
    switch (f.regime) {
    case Regime::BelowEP: return -magnitude;
    case Regime::AtEP: return 0.0;
    case Regime::AboveEP: return magnitude;
    }
    return 0.0;
}

inline std::vector<PotentialSample> potential_profile(const ModelParams& params, std::span<const double> xs,
                                                      PotentialConvention convention = PotentialConvention::Frequency) {
    const double k = potential_curvature(params, convention);
    std::vector<PotentialSample> out;
    out.reserve(xs.size());
    for (double x : xs) {
        if (!std::isfinite(x))
            throw ParameterError("potential_profile: non-finite abscissa");
        out.push_back({x, 0.5 * k * x * x});
    }
    return out;
}

} // namespace invosc
