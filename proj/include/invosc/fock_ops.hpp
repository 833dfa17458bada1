#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "invosc/errors.hpp"
#include "invosc/model.hpp"

namespace invosc {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr cplx I_UNIT{0.0, 1.0};

enum class Basis { BiorthogonalNumber, NormalNumber, PositionGrid };

inline std::string to_string(Basis b) {
    switch (b) {
    case Basis::BiorthogonalNumber: return "biorthogonal_number";
    case Basis::NormalNumber: return "normal_number";
    case Basis::PositionGrid: return "position_grid";
    }
    return "unknown";
}

enum class LadderKind { Raise, Lower };

/// Dense N x N complex operator with a basis tag. Immutable once built; binary
/// operations refuse to mix basis tags or dimensions.
class TruncatedOperator {
public:
    TruncatedOperator(Matrix entries, Basis basis) : entries_(std::move(entries)), basis_(basis) {
        if (entries_.rows() != entries_.cols())
            throw DimensionError("TruncatedOperator must be square");
        if (!entries_.allFinite())
            throw ParameterError("TruncatedOperator entries must be finite");
    }

    static TruncatedOperator identity(std::size_t n, Basis basis) {
        return {Matrix::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)), basis};
    }
    static TruncatedOperator zero(std::size_t n, Basis basis) {
        return {Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)), basis};
    }

    [[nodiscard]] std::size_t dim() const { return static_cast<std::size_t>(entries_.rows()); }
    [[nodiscard]] const Matrix& entries() const { return entries_; }
    [[nodiscard]] Basis basis() const { return basis_; }
    [[nodiscard]] cplx operator()(std::size_t row, std::size_t col) const {
        return entries_(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
    }

    [[nodiscard]] TruncatedOperator adjoint() const { return {entries_.adjoint(), basis_}; }
    [[nodiscard]] TruncatedOperator transpose() const { return {entries_.transpose(), basis_}; }

    /// Frobenius norm.
    [[nodiscard]] double norm() const { return entries_.norm(); }

    friend TruncatedOperator operator+(const TruncatedOperator& a, const TruncatedOperator& b) {
        check_compatible(a, b);
        return {a.entries_ + b.entries_, a.basis_};
    }
    friend TruncatedOperator operator-(const TruncatedOperator& a, const TruncatedOperator& b) {
        check_compatible(a, b);
        return {a.entries_ - b.entries_, a.basis_};
    }
    friend TruncatedOperator operator*(const TruncatedOperator& a, const TruncatedOperator& b) {
        check_compatible(a, b);
        return {a.entries_ * b.entries_, a.basis_};
    }
    friend TruncatedOperator operator*(cplx s, const TruncatedOperator& a) { return {s * a.entries_, a.basis_}; }
    friend TruncatedOperator operator*(double s, const TruncatedOperator& a) { return {s * a.entries_, a.basis_}; }

    static void check_compatible(const TruncatedOperator& a, const TruncatedOperator& b) {
        if (a.basis_ != b.basis_)
            throw BasisError("operators carry different basis tags: " + to_string(a.basis_) + " vs " +
                             to_string(b.basis_));
        if (a.dim() != b.dim())
            throw DimensionError("operator dimensions differ");
    }

private:
    Matrix entries_;
    Basis basis_;
};

inline TruncatedOperator commutator(const TruncatedOperator& a, const TruncatedOperator& b) {
    return a * b - b * a;
}

/// Largest entry magnitude of (a - b) restricted to the top-left `block` x `block` corner.
inline double block_max_abs_diff(const Matrix& a, const Matrix& b, std::size_t block) {
    const auto k = static_cast<Eigen::Index>(block);
    return (a.topLeftCorner(k, k) - b.topLeftCorner(k, k)).cwiseAbs().maxCoeff();
}

inline double block_max_abs_diff(const TruncatedOperator& a, const TruncatedOperator& b, std::size_t block) {
    TruncatedOperator::check_compatible(a, b);
    return block_max_abs_diff(a.entries(), b.entries(), block);
}

/// Top-left block that survives truncation after `ladder_products` ladder factors
/// (the last `ladder_products` rows and columns are corrupted by the cut).
inline std::size_t interior_block(std::size_t n, std::size_t ladder_products) {
    return n > ladder_products ? n - ladder_products : 0;
}

// ---------------------------------------------------------------------------
// Ladder algebra

inline TruncatedOperator build_ladder(std::size_t n, LadderKind kind, Basis basis = Basis::BiorthogonalNumber) {
    if (n < 2)
        throw DimensionError("build_ladder needs n >= 2");
    Matrix m = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (Eigen::Index k = 1; k < static_cast<Eigen::Index>(n); ++k) {
        const double c = std::sqrt(static_cast<double>(k));
        if (kind == LadderKind::Lower)
            m(k - 1, k) = c;
        else
            m(k, k - 1) = c;
    }
    return {std::move(m), basis};
}

using IntMatrix = Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>;

/// Ladder matrix stored by radicands: entry (i, j) is sqrt(radicand(i, j)).
inline IntMatrix ladder_radicands(std::size_t n, LadderKind kind) {
    if (n < 2)
        throw DimensionError("ladder_radicands needs n >= 2");
    IntMatrix m = IntMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (Eigen::Index k = 1; k < static_cast<Eigen::Index>(n); ++k)
        (kind == LadderKind::Lower ? m(k - 1, k) : m(k, k - 1)) = k;
    return m;
}

namespace detail {

/// Exact integer value of (sqrt a)(sqrt b) products summed over k, valid while
/// each entry has at most one nonzero term and that term is a perfect square.
inline IntMatrix radicand_product_value(const IntMatrix& a, const IntMatrix& b) {
    const Eigen::Index n = a.rows();
    IntMatrix out = IntMatrix::Zero(n, b.cols());
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < b.cols(); ++j) {
            int terms = 0;
            for (Eigen::Index k = 0; k < a.cols(); ++k) {
                const long long r = a(i, k) * b(k, j);
                if (r == 0)
                    continue;
                if (++terms > 1)
                    throw DimensionError("radicand product has more than one term per entry");
                auto root = static_cast<long long>(std::llround(std::sqrt(static_cast<double>(r))));
                if (root * root != r)
                    throw DimensionError("radicand product is not a perfect square");
                out(i, j) = root;
            }
        }
    return out;
}

} // namespace detail

/// [b-, b+] in exact integer arithmetic.
inline IntMatrix exact_ladder_commutator(std::size_t n) {
    const IntMatrix lower = ladder_radicands(n, LadderKind::Lower);
    const IntMatrix raise = ladder_radicands(n, LadderKind::Raise);
    return detail::radicand_product_value(lower, raise) - detail::radicand_product_value(raise, lower);
}

struct SU11Generators {
    TruncatedOperator s_z;
    TruncatedOperator s_plus;
    TruncatedOperator s_minus;
};

/// S_z = (b+ b- + 1/2)/2, S+ = (b+)^2/2, S- = (b-)^2/2 from ladder products.
inline SU11Generators build_su11(std::size_t n, Basis basis = Basis::BiorthogonalNumber) {
    if (n < 4)
        throw DimensionError("build_su11 needs n >= 4");
    const TruncatedOperator raise = build_ladder(n, LadderKind::Raise, basis);
    const TruncatedOperator lower = build_ladder(n, LadderKind::Lower, basis);
    const TruncatedOperator id = TruncatedOperator::identity(n, basis);
    return {0.5 * (raise * lower + 0.5 * id), 0.5 * (raise * raise), 0.5 * (lower * lower)};
}

/// H = 2i*omega*S_z + g*(S+ - S-) in the biorthogonal number basis.
inline TruncatedOperator build_hamiltonian(const ModelParams& params) {
    params.validate();
    const SU11Generators su = build_su11(params.truncation);
    return 2.0 * I_UNIT * params.omega * su.s_z + params.g * (su.s_plus - su.s_minus);
}

/// The same Hamiltonian, Omega(p^2 - x^2)/2 - iG(xp + px)/2, written in the Hermite
/// basis of complex width `width` (ground function exp(-width x^2 / 2)).
///
/// width = i reproduces build_hamiltonian; width = 1 is the ordinary normal-boson
/// basis. For width = (g +/- sqrt(g^2 - omega^2))/omega the (c^dagger)^2 term
/// vanishes and the matrix is upper triangular.
inline TruncatedOperator build_frame_hamiltonian(const ModelParams& params, cplx width) {
    params.validate();
    if (std::abs(width) == 0.0 || !std::isfinite(width.real()) || !std::isfinite(width.imag()))
        throw ParameterError("frame width must be finite and nonzero");
    const auto n = static_cast<Eigen::Index>(params.truncation);
    const cplx inv = 1.0 / width;
    const cplx diag_coeff = 0.5 * params.omega * (width - inv);
    const cplx lower2 = -(0.25 * params.omega * (width + inv) + 0.5 * params.g); // multiplies c^2
    const cplx raise2 = -(0.25 * params.omega * (width + inv) - 0.5 * params.g); // multiplies (c^dagger)^2
    Matrix m = Matrix::Zero(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        m(k, k) = diag_coeff * (static_cast<double>(k) + 0.5);
        if (k + 2 < n) {
            const double amp = std::sqrt(static_cast<double>((k + 1) * (k + 2)));
            m(k, k + 2) = lower2 * amp;
            m(k + 2, k) = raise2 * amp;
        }
    }
    const bool real_width = width.imag() == 0.0 && width.real() > 0.0;
    return {std::move(m), real_width ? Basis::NormalNumber : Basis::BiorthogonalNumber};
}

/// Width of the squeezed normal-boson frame in which H is triangular above the EP.
inline double normal_frame_width(const ModelParams& params) {
    const EffectiveFrequency f = effective_frequency(params);
    if (f.regime == Regime::BelowEP)
        throw RegimeError("normal-boson frame exists only at or beyond the exceptional point");
    return (params.g + f.value) / params.omega;
}

struct PositionMomentum {
    TruncatedOperator x;
    TruncatedOperator p;
};

/// x and p in the Hermite basis of complex width s:
/// x = (c + c^dagger)/sqrt(2s), p = -i sqrt(s/2) (c - c^dagger).
inline PositionMomentum build_frame_position_momentum(std::size_t n, cplx width, Basis basis) {
    const TruncatedOperator lower = build_ladder(n, LadderKind::Lower, basis);
    const TruncatedOperator raise = build_ladder(n, LadderKind::Raise, basis);
    const cplx x_scale = 1.0 / std::sqrt(2.0 * width);
    const cplx p_scale = -I_UNIT * std::sqrt(width / 2.0);
    return {x_scale * (lower + raise), p_scale * (lower - raise)};
}

/// x = (b- + b+)/sqrt(2i), p = (b- - b+)/sqrt(2i) in the biorthogonal number basis.
inline PositionMomentum build_position_momentum(std::size_t n) {
    if (n < 2)
        throw DimensionError("build_position_momentum needs n >= 2");
    const TruncatedOperator lower = build_ladder(n, LadderKind::Lower);
    const TruncatedOperator raise = build_ladder(n, LadderKind::Raise);
    const cplx scale = 1.0 / std::sqrt(2.0 * I_UNIT);
    return {scale * (lower + raise), scale * (lower - raise)};
}

/// Omega(p^2 - x^2)/2 - iG(xp + px)/2 assembled from matrix products.
inline TruncatedOperator hamiltonian_from_xp(const PositionMomentum& xp, const ModelParams& params) {
    const TruncatedOperator& x = xp.x;
    const TruncatedOperator& p = xp.p;
    return 0.5 * params.omega * (p * p - x * x) - 0.5 * I_UNIT * params.g * (x * p + p * x);
}

struct NormalBoson {
    TruncatedOperator a;
    TruncatedOperator a_dag;
};

inline NormalBoson build_normal_boson(std::size_t n) {
    if (n < 2)
        throw DimensionError("build_normal_boson needs n >= 2");
    return {build_ladder(n, LadderKind::Lower, Basis::NormalNumber),
            build_ladder(n, LadderKind::Raise, Basis::NormalNumber)};
}

// ---------------------------------------------------------------------------
// Matrix exponential

namespace detail {

inline double one_norm(const Matrix& a) { return a.cwiseAbs().colwise().sum().maxCoeff(); }

// Pade approximants of degree m with their backward-error thresholds theta_m:
// for ||A||_1 <= theta_m the approximant r_m(A) equals exp(A + E) with
// ||E|| / ||A|| <= 2^-53 (unit roundoff).
inline constexpr std::array<double, 5> kPadeTheta = {1.495585217958292e-2, 2.539398330063230e-1,
                                                     9.504178996162932e-1, 2.097847961257068e0,
                                                     5.371920351148152e0};

inline Matrix pade_low(const Matrix& a, int m) {
    static constexpr double b3[] = {120., 60., 12., 1.};
    static constexpr double b5[] = {30240., 15120., 3360., 420., 30., 1.};
    static constexpr double b7[] = {17297280., 8648640., 1995840., 277200., 25200., 1512., 56., 1.};
    static constexpr double b9[] = {17643225600., 8821612800., 2075673600., 302702400., 30270240.,
                                    2162160.,     110880.,     3960.,       90.,       1.};
    const double* b = m == 3 ? b3 : m == 5 ? b5 : m == 7 ? b7 : b9;
    const Eigen::Index n = a.rows();
    const Matrix id = Matrix::Identity(n, n);
    const Matrix a2 = a * a;
    Matrix power = id;
    Matrix u_even = b[1] * id;
    Matrix v_even = b[0] * id;
    for (int k = 2; k <= m; k += 2) {
        power = power * a2;
        u_even += b[k + 1] * power;
        v_even += b[k] * power;
    }
    const Matrix u = a * u_even;
    return (v_even - u).partialPivLu().solve(v_even + u);
}

inline Matrix pade13(const Matrix& a) {
    static constexpr double b[] = {64764752532480000., 32382376266240000., 7771770303897600.,
                                   1187353796428800.,  129060195264000.,   10559470521600.,
                                   670442572800.,      33522128640.,       1323241920.,
                                   40840800.,          960960.,            16380.,
                                   182.,               1.};
    const Eigen::Index n = a.rows();
    const Matrix id = Matrix::Identity(n, n);
    const Matrix a2 = a * a;
    const Matrix a4 = a2 * a2;
    const Matrix a6 = a4 * a2;
    const Matrix u_inner = a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2);
    const Matrix u = a * (u_inner + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id);
    const Matrix v_inner = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2);
    const Matrix v = v_inner + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
    return (v - u).partialPivLu().solve(v + u);
}

} // namespace detail

/// exp(A) by scaling and squaring with a Pade kernel (degree 3..13 chosen from the
/// 1-norm). The kernel's backward error is at unit-roundoff level relative to ||A||;
/// the squaring phase can amplify forward error for highly non-normal A.
inline Matrix matrix_exponential(const Matrix& a) {
    if (a.rows() != a.cols())
        throw DimensionError("matrix_exponential needs a square matrix");
    if (!a.allFinite())
        throw ConvergenceError("matrix_exponential: non-finite input");
    const double norm = detail::one_norm(a);
    if (a.rows() == 0)
        return a;
    constexpr std::array<int, 4> low_degrees = {3, 5, 7, 9};
    for (std::size_t i = 0; i < low_degrees.size(); ++i) {
        if (norm <= detail::kPadeTheta[i])
            return detail::pade_low(a, low_degrees[i]);
    }
    int squarings = 0;
    if (norm > detail::kPadeTheta[4])
        squarings = static_cast<int>(std::ceil(std::log2(norm / detail::kPadeTheta[4])));
    if (squarings > 1000)
        throw ConvergenceError("matrix_exponential: norm too large");
    Matrix result = detail::pade13(a / std::ldexp(1.0, squarings));
    for (int k = 0; k < squarings; ++k)
        result = result * result;
    if (!result.allFinite())
        throw ConvergenceError("matrix_exponential: overflow during squaring");
    return result;
}

inline TruncatedOperator matrix_exponential(const TruncatedOperator& a) {
    return {matrix_exponential(a.entries()), a.basis()};
}

// ---------------------------------------------------------------------------
// Similarity transformation

/// R(eta) = exp(-i (eta/2)(S+ + S-)) at dimension n. R(-eta) is its inverse up to
/// truncation effects at the edge.
inline TruncatedOperator build_similarity_eta(std::size_t n, double eta) {
    const SU11Generators su = build_su11(n);
    return matrix_exponential((-0.5 * eta) * I_UNIT * (su.s_plus + su.s_minus));
}

inline TruncatedOperator build_similarity(const ModelParams& params) {
    return build_similarity_eta(params.truncation, eta_from_g(params));
}

struct SimilarityPair {
    double eta;
    TruncatedOperator forward;
    TruncatedOperator inverse;
};

inline SimilarityPair build_similarity_pair(const ModelParams& params) {
    const double eta = eta_from_g(params);
    return {eta, build_similarity_eta(params.truncation, eta), build_similarity_eta(params.truncation, -eta)};
}

/// R * H * R^{-1}, with R^{-1} obtained by an LU solve.
inline TruncatedOperator conjugate(const TruncatedOperator& r, const TruncatedOperator& h) {
    TruncatedOperator::check_compatible(r, h);
    const Matrix rh = r.entries() * h.entries();
    // X R = RH  <=>  R^T X^T = (RH)^T
    const Matrix xt = r.entries().transpose().partialPivLu().solve(rh.transpose());
    return {xt.transpose(), h.basis()};
}

inline TruncatedOperator conjugate(const TruncatedOperator& r, const TruncatedOperator& r_inverse,
                                   const TruncatedOperator& h) {
    return r * h * r_inverse;
}

} // namespace invosc
