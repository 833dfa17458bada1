#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstddef>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>

#include "invosc/errors.hpp"
#include "invosc/fock_ops.hpp"
#include "invosc/model.hpp"

namespace invosc {

// ---------------------------------------------------------------------------
// Dense non-Hermitian eigensolver

inline constexpr std::size_t kMaxDenseDim = 1024;

struct Balanced {
    Matrix matrix;      ///< D^{-1} A D
    Eigen::VectorXd scale; ///< diagonal of D
};

/// Diagonal similarity scaling by powers of two so that row and column norms of
/// each index are comparable (the non-permuting part of LAPACK's xGEBAL).
inline Balanced balance(const Matrix& a) {
    constexpr double radix = 2.0;
    constexpr double radix_sq = radix * radix;
    const Eigen::Index n = a.rows();
    Balanced out{a, Eigen::VectorXd::Ones(n)};
    Matrix& m = out.matrix;
    bool converged = false;
    for (int sweep = 0; sweep < 100 && !converged; ++sweep) {
        converged = true;
        for (Eigen::Index i = 0; i < n; ++i) {
            double col = 0.0;
            double row = 0.0;
            for (Eigen::Index j = 0; j < n; ++j) {
                if (j == i)
                    continue;
                col += std::abs(m(j, i));
                row += std::abs(m(i, j));
            }
            if (col == 0.0 || row == 0.0)
                continue;
            double g = row / radix;
            double f = 1.0;
            const double s = col + row;
            while (col < g) {
                f *= radix;
                col *= radix_sq;
            }
            g = row * radix;
            while (col > g) {
                f /= radix;
                col /= radix_sq;
            }
            if ((col + row) / f < 0.95 * s) {
                converged = false;
                out.scale(i) *= f;
                m.row(i) /= f;
                m.col(i) *= f;
            }
        }
    }
    return out;
}

/// Eigen-decomposition of a dense complex matrix.
///
/// Values are ordered by |eps| ascending, ties broken by ascending Im. Right vectors
/// have unit 2-norm. When the right-vector matrix is invertible the left vectors
/// are the columns of V^{-H}, so left_j^H right_k = delta_jk; otherwise (defective
/// input) they are eigenvectors of A^H and `biorthogonal` is false.
struct EigenDecomposition {
    std::vector<cplx> values;
    Matrix right_vectors;
    Matrix left_vectors;
    std::vector<double> residuals;
    bool biorthogonal = false;
};

namespace detail {

inline std::vector<Eigen::Index> spectral_order(const Eigen::VectorXcd& values) {
    std::vector<Eigen::Index> order(static_cast<std::size_t>(values.size()));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        const double ma = std::abs(values(a));
        const double mb = std::abs(values(b));
        if (ma != mb)
            return ma < mb;
        return values(a).imag() < values(b).imag();
    });
    return order;
}

inline void check_dense_input(const Matrix& a) {
    if (a.rows() != a.cols())
        throw DimensionError("diagonalize needs a square matrix");
    if (a.rows() == 0)
        throw DimensionError("diagonalize needs a non-empty matrix");
    if (static_cast<std::size_t>(a.rows()) > kMaxDenseDim)
        throw DimensionError("diagonalize: dimension exceeds the dense-solver guard");
}

} // namespace detail

/// Eigenvalues only, same ordering as diagonalize.
inline std::vector<cplx> eigenvalues(const Matrix& a) {
    detail::check_dense_input(a);
    const Balanced bal = balance(a);
    Eigen::ComplexEigenSolver<Matrix> solver(bal.matrix, false);
    if (solver.info() != Eigen::Success)
        throw ConvergenceError("diagonalize: QR iteration did not converge");
    const Eigen::VectorXcd& vals = solver.eigenvalues();
    std::vector<cplx> out;
    out.reserve(static_cast<std::size_t>(vals.size()));
    for (Eigen::Index k : detail::spectral_order(vals))
        out.push_back(vals(k));
    return out;
}

inline std::vector<cplx> eigenvalues(const TruncatedOperator& h) { return eigenvalues(h.entries()); }

inline EigenDecomposition diagonalize(const Matrix& a) {
    detail::check_dense_input(a);
    const Eigen::Index n = a.rows();
    const Balanced bal = balance(a);
    Eigen::ComplexEigenSolver<Matrix> solver(bal.matrix, true);
    if (solver.info() != Eigen::Success)
        throw ConvergenceError("diagonalize: QR iteration did not converge");

    const auto order = detail::spectral_order(solver.eigenvalues());
    EigenDecomposition out;
    out.right_vectors.resize(n, n);
    out.values.reserve(static_cast<std::size_t>(n));
    for (Eigen::Index k = 0; k < n; ++k) {
        const Eigen::Index src = order[static_cast<std::size_t>(k)];
        out.values.push_back(solver.eigenvalues()(src));
        Vector v = bal.scale.cast<cplx>().asDiagonal() * solver.eigenvectors().col(src);
        const double norm = v.norm();
        if (norm > 0.0)
            v /= norm;
        out.right_vectors.col(k) = v;
    }

    out.residuals.reserve(static_cast<std::size_t>(n));
    for (Eigen::Index k = 0; k < n; ++k) {
        const Vector r = a * out.right_vectors.col(k) - out.values[static_cast<std::size_t>(k)] * out.right_vectors.col(k);
        out.residuals.push_back(r.norm());
    }

    Eigen::FullPivLU<Matrix> lu(out.right_vectors);
    const double rcond_guard = 1e3 * std::numeric_limits<double>::epsilon();
    const auto& u = lu.matrixLU();
    const double max_pivot = u.diagonal().cwiseAbs().maxCoeff();
    const double min_pivot = u.diagonal().cwiseAbs().minCoeff();
    if (lu.isInvertible() && min_pivot > rcond_guard * max_pivot) {
        out.left_vectors = lu.inverse().adjoint();
        out.biorthogonal = true;
    } else {
        // Defective: left vectors from A^H, matched by conjugate eigenvalue.
        Eigen::ComplexEigenSolver<Matrix> adj(a.adjoint(), true);
        if (adj.info() != Eigen::Success)
            throw ConvergenceError("diagonalize: QR iteration on the adjoint did not converge");
        out.left_vectors.resize(n, n);
        std::vector<bool> used(static_cast<std::size_t>(n), false);
        for (Eigen::Index k = 0; k < n; ++k) {
            const cplx target = std::conj(out.values[static_cast<std::size_t>(k)]);
            Eigen::Index best = -1;
            double best_dist = std::numeric_limits<double>::infinity();
            for (Eigen::Index j = 0; j < n; ++j) {
                if (used[static_cast<std::size_t>(j)])
                    continue;
                const double d = std::abs(adj.eigenvalues()(j) - target);
                if (d < best_dist) {
                    best_dist = d;
                    best = j;
                }
            }
            used[static_cast<std::size_t>(best)] = true;
            Vector w = adj.eigenvectors().col(best);
            const double norm = w.norm();
            if (norm > 0.0)
                w /= norm;
            out.left_vectors.col(k) = w;
        }
        out.biorthogonal = false;
    }
    return out;
}

inline EigenDecomposition diagonalize(const TruncatedOperator& h) { return diagonalize(h.entries()); }

// ---------------------------------------------------------------------------
// Spectrum of the coupled Hamiltonian

enum class Branch { ImaginaryPair, DegenerateZero, Real };

inline std::string to_string(Branch b) {
    switch (b) {
    case Branch::ImaginaryPair: return "imaginary_pair";
    case Branch::DegenerateZero: return "degenerate_zero";
    case Branch::Real: return "real";
    }
    return "unknown";
}

struct Level {
    std::size_t n = 0;
    cplx value;
};

/// Ket-branch levels at one coupling. For ImaginaryPair the bra branch is the
/// complex conjugate of each level (eigenvalues of H^dagger).
struct SpectrumPoint {
    double g = 0.0;
    Regime regime = Regime::BelowEP;
    std::vector<Level> levels;
    Branch branch = Branch::ImaginaryPair;

    [[nodiscard]] std::vector<cplx> mirror_levels() const {
        std::vector<cplx> out;
        out.reserve(levels.size());
        for (const Level& l : levels)
            out.push_back(std::conj(l.value));
        return out;
    }
};

struct SweepResult {
    std::vector<SpectrumPoint> points;
    double ep_estimate = std::numeric_limits<double>::quiet_NaN();
    std::size_t flips = 0; ///< ImaginaryPair <-> Real transitions (DegenerateZero points skipped)
};

/// Matrix whose low spectrum represents H at the given coupling: the biorthogonal
/// number basis below the EP, and the squeezed normal-boson frame at and beyond
/// it (where the number-basis truncation is i times a Hermitian matrix and cannot
/// carry the real branch).
inline TruncatedOperator spectral_matrix(const ModelParams& params) {
    switch (classify_regime(params)) {
    case Regime::BelowEP: return build_hamiltonian(params);
    case Regime::AtEP: return build_frame_hamiltonian(params.with_g(params.omega), 1.0);
    case Regime::AboveEP: return build_frame_hamiltonian(params, normal_frame_width(params));
    }
    throw RegimeError("unknown regime");
}

/// Classify a list of low levels by where they sit in the complex plane.
inline Branch classify_levels(const std::vector<cplx>& values, double tol) {
    bool all_zero = true;
    bool all_imag = true;
    bool all_real = true;
    for (cplx v : values) {
        const double scale = std::max(1.0, std::abs(v));
        if (std::abs(v) > tol)
            all_zero = false;
        if (std::abs(v.real()) > tol * scale)
            all_imag = false;
        if (std::abs(v.imag()) > tol * scale)
            all_real = false;
    }
    if (all_zero)
        return Branch::DegenerateZero;
    if (all_imag)
        return Branch::ImaginaryPair;
    if (all_real)
        return Branch::Real;
    throw ConvergenceError("spectrum levels are neither imaginary nor real within tolerance");
}

inline SpectrumPoint spectrum_point(const ModelParams& params, std::size_t levels) {
    params.validate();
    if (levels == 0 || levels > params.truncation)
        throw ParameterError("levels must be in [1, truncation]");
    const std::vector<cplx> values = eigenvalues(spectral_matrix(params));
    SpectrumPoint point;
    point.g = params.g;
    point.regime = classify_regime(params);
    std::vector<cplx> low(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(levels));
    for (std::size_t n = 0; n < levels; ++n)
        point.levels.push_back({n, low[n]});
    point.branch = classify_levels(low, params.tol);
    return point;
}

namespace detail {

template <class Fn>
void parallel_for(std::size_t count, std::size_t threads, Fn&& fn) {
    if (threads == 0)
        threads = std::max<std::size_t>(1, std::thread::hardware_concurrency());
    threads = std::min(threads, std::max<std::size_t>(count, 1));
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i)
            fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> workers;
    workers.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) {
        workers.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error)
                        error = std::current_exception();
                }
            }
        });
    }
    for (auto& w : workers)
        w.join();
    if (error)
        std::rethrow_exception(error);
}

} // namespace detail

inline double estimate_ep(const std::vector<SpectrumPoint>& points, std::size_t* flips_out = nullptr) {
    double estimate = std::numeric_limits<double>::quiet_NaN();
    std::size_t flips = 0;
    const SpectrumPoint* last_definite = nullptr;
    for (const SpectrumPoint& p : points) {
        if (p.branch == Branch::DegenerateZero) {
            if (std::isnan(estimate))
                estimate = p.g;
            continue;
        }
        if (last_definite != nullptr && last_definite->branch != p.branch) {
            ++flips;
            if (std::isnan(estimate))
                estimate = 0.5 * (last_definite->g + p.g);
        }
        last_definite = &p;
    }
    if (flips_out != nullptr)
        *flips_out = flips;
    return estimate;
}

inline SweepResult spectrum_sweep(double omega, const std::vector<double>& g_grid, std::size_t truncation,
                                  std::size_t levels, std::size_t threads = 0, double tol = 1e-9) {
    if (!std::is_sorted(g_grid.begin(), g_grid.end()))
        throw ParameterError("spectrum_sweep: g grid must be sorted ascending");
    ModelParams base{omega, 0.0, truncation, tol};
    base.validate();
    SweepResult result;
    result.points.resize(g_grid.size());
    detail::parallel_for(g_grid.size(), threads,
                         [&](std::size_t i) { result.points[i] = spectrum_point(base.with_g(g_grid[i]), levels); });
    result.ep_estimate = estimate_ep(result.points, &result.flips);
    return result;
}

/// Refine the exceptional point by bisection on the branch classification between
/// a coupling classified ImaginaryPair (lo) and one classified Real (hi).
inline double locate_exceptional_point(double omega, double lo, double hi, std::size_t truncation,
                                       std::size_t levels = 3, double tol = 1e-9, int iterations = 60) {
    ModelParams base{omega, lo, truncation, tol};
    base.validate();
    if (spectrum_point(base.with_g(lo), levels).branch != Branch::ImaginaryPair ||
        spectrum_point(base.with_g(hi), levels).branch != Branch::Real)
        throw ParameterError("locate_exceptional_point: bracket does not straddle the transition");
    for (int it = 0; it < iterations && hi - lo > tol * omega; ++it) {
        const double mid = 0.5 * (lo + hi);
        const Branch b = spectrum_point(base.with_g(mid), levels).branch;
        if (b == Branch::DegenerateZero)
            return mid;
        (b == Branch::ImaginaryPair ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------------------
// Eigenvalue law

struct LawResidual {
    std::size_t n = 0;
    cplx target;
    double residual = 0.0;       ///< max over ket and bra branches of the distance to the target
    double bra_residual = 0.0;   ///< distance of the bra branch to conj(target), below the EP
};

inline double nearest_distance(const std::vector<cplx>& values, cplx target) {
    double best = std::numeric_limits<double>::infinity();
    for (cplx v : values)
        best = std::min(best, std::abs(v - target));
    return best;
}

/// Distance from the computed spectrum to i*Gamma_I(n + 1/2) (and the mirrored
/// bra branch -i*Gamma_I(n + 1/2) from H^dagger) below the EP, or Gamma(n + 1/2)
/// beyond it.
inline std::vector<LawResidual> verify_eigenvalue_law(const ModelParams& params, std::size_t levels) {
    params.validate();
    if (levels == 0 || levels > params.truncation / 8)
        throw ParameterError("verify_eigenvalue_law: levels must be in [1, truncation/8]");
    const EffectiveFrequency f = effective_frequency(params);
    if (f.regime == Regime::AtEP)
        throw RegimeError("eigenvalue law degenerates at the exceptional point; use ep_degeneracy_check");

    const TruncatedOperator h = spectral_matrix(params);
    const std::vector<cplx> ket = eigenvalues(h);
    std::vector<cplx> bra;
    if (f.regime == Regime::BelowEP)
        bra = eigenvalues(h.adjoint());

    std::vector<LawResidual> out;
    for (std::size_t n = 0; n < levels; ++n) {
        const double rung = static_cast<double>(n) + 0.5;
        LawResidual r;
        r.n = n;
        if (f.regime == Regime::BelowEP) {
            r.target = I_UNIT * f.value * rung;
            r.bra_residual = nearest_distance(bra, std::conj(r.target));
            r.residual = std::max(nearest_distance(ket, r.target), r.bra_residual);
        } else {
            r.target = cplx{f.value * rung, 0.0};
            r.residual = nearest_distance(ket, r.target);
        }
        out.push_back(r);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Exceptional point

struct EpDegeneracyReport {
    std::size_t truncation = 0;
    double identity_residual = 0.0;        ///< interior |H(G=Omega) - (-Omega a^2)| from one x,p pair
    double builder_residual = 0.0;         ///< interior |x,p-assembled H - build_hamiltonian(G=Omega)|
    double triangular_max_eigenvalue = 0.0; ///< max |eps| of -Omega a^2 in the normal basis
    bool triangular_is_strict = false;
    double biorthogonal_smallest = 0.0;    ///< smallest |eps| of the number-basis truncation at G=Omega
};

inline EpDegeneracyReport ep_degeneracy_check(double omega, std::size_t truncation) {
    if (truncation < 16)
        throw ParameterError("ep_degeneracy_check needs truncation >= 16");
    const ModelParams params{omega, omega, truncation, 1e-9};
    params.validate();
    EpDegeneracyReport rep;
    rep.truncation = truncation;

    const PositionMomentum xp = build_position_momentum(truncation);
    const TruncatedOperator h_xp = hamiltonian_from_xp(xp, params);
    const TruncatedOperator a = (1.0 / std::sqrt(2.0)) * (xp.x + I_UNIT * xp.p);
    const TruncatedOperator minus_omega_a2 = (-omega) * (a * a);
    const std::size_t block = interior_block(truncation, 4);
    rep.identity_residual = block_max_abs_diff(h_xp, minus_omega_a2, block);
    rep.builder_residual = block_max_abs_diff(h_xp, build_hamiltonian(params), block);

    const NormalBoson nb = build_normal_boson(truncation);
    const TruncatedOperator triangular = (-omega) * (nb.a * nb.a);
    const Matrix& t = triangular.entries();
    rep.triangular_is_strict = t.triangularView<Eigen::Lower>().toDenseMatrix().cwiseAbs().maxCoeff() == 0.0;
    double max_eig = 0.0;
    for (cplx v : eigenvalues(triangular))
        max_eig = std::max(max_eig, std::abs(v));
    rep.triangular_max_eigenvalue = max_eig;

    rep.biorthogonal_smallest = std::abs(eigenvalues(build_hamiltonian(params)).front());
    return rep;
}

// ---------------------------------------------------------------------------
// Eigenvectors of the original Hamiltonian and stationary densities

struct OriginalEigenvectors {
    std::size_t n = 0;
    cplx eigenvalue;  ///< i*Gamma_I(n + 1/2)
    Vector right;     ///< R^{-1} e_n
    Vector left;      ///< R e_n, paired with `right` by the bilinear (transpose) form
    double residual = 0.0; ///< ||H right - eigenvalue right|| / ||right||
};

inline OriginalEigenvectors original_eigenvectors(const ModelParams& params, std::size_t n,
                                                  const SimilarityPair& sim) {
    params.validate();
    if (n >= params.truncation)
        throw ParameterError("original_eigenvectors: n must be below the truncation");
    const EffectiveFrequency f = effective_frequency(params);
    if (f.regime != Regime::BelowEP)
        throw RegimeError("original_eigenvectors is defined below the exceptional point only");
    const auto idx = static_cast<Eigen::Index>(n);
    OriginalEigenvectors out;
    out.n = n;
    out.eigenvalue = I_UNIT * f.value * (static_cast<double>(n) + 0.5);
    out.right = sim.inverse.entries().col(idx);
    out.left = sim.forward.entries().col(idx);
    const TruncatedOperator h = build_hamiltonian(params);
    out.residual = (h.entries() * out.right - out.eigenvalue * out.right).norm() / out.right.norm();
    return out;
}

inline OriginalEigenvectors original_eigenvectors(const ModelParams& params, std::size_t n) {
    return original_eigenvectors(params, n, build_similarity_pair(params));
}

/// Bilinear pairing matrix left_m^T right_k for m, k < count.
inline Matrix biorthogonality_matrix(const ModelParams& params, std::size_t count) {
    const SimilarityPair sim = build_similarity_pair(params);
    const auto k = static_cast<Eigen::Index>(count);
    return sim.forward.entries().leftCols(k).transpose() * sim.inverse.entries().leftCols(k);
}

/// Max interior entry of [H, rho_n] with rho_n = right_n left_n^T.
inline double density_invariance(const ModelParams& params, std::size_t n) {
    params.validate();
    if (n >= params.truncation / 4)
        throw ParameterError("density_invariance: n must be below truncation/4");
    const OriginalEigenvectors ev = original_eigenvectors(params, n);
    const TruncatedOperator rho{ev.right * ev.left.transpose(), Basis::BiorthogonalNumber};
    const TruncatedOperator h = build_hamiltonian(params);
    const TruncatedOperator comm = commutator(h, rho);
    const auto block = static_cast<Eigen::Index>(interior_block(params.truncation, 4));
    return comm.entries().topLeftCorner(block, block).cwiseAbs().maxCoeff();
}

} // namespace invosc
