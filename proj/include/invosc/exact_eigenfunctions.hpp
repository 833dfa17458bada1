#pragma once

// Exact dual eigenfunctions of the inverted oscillator.
//
//   ket:  psi_{r,n}(x) = (sqrt(i/2))^n / sqrt(n!) / sqrt(N_r) * P_n(x) e^{-i x^2/2},  N_r = sqrt(pi/i)
//   bra:  psi_{l,n}(x) = (sqrt(i/2))^n / (i^n sqrt(n!)) / sqrt(N_l) * Q_n(x) e^{+i x^2/2},  N_l = sqrt(pi/-i)
//
// with P_{n+1} = 2x P_n + i P_n' (action of x + i d/dx) and Q_{n+1} = 2x Q_n - i Q_n'
// (action of x - i d/dx). Polynomials live over Q(i); every radical is kept as
// exponent metadata so that inner products close exactly.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "invosc/errors.hpp"

namespace invosc::exact {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Element of Q(i): re + i*im with exact rational parts.
class GaussianRational {
public:
    GaussianRational() = default;
    GaussianRational(Rational re, Rational im = 0) : re_(std::move(re)), im_(std::move(im)) {} // NOLINT
    GaussianRational(long long re) : re_(re), im_(0) {} // NOLINT

    static GaussianRational i() { return {0, 1}; }

    [[nodiscard]] const Rational& re() const { return re_; }
    [[nodiscard]] const Rational& im() const { return im_; }
    [[nodiscard]] bool is_zero() const { return re_ == 0 && im_ == 0; }
    [[nodiscard]] GaussianRational conj() const { return {re_, -im_}; }
    [[nodiscard]] Rational norm_sq() const { return re_ * re_ + im_ * im_; }

    friend GaussianRational operator+(const GaussianRational& a, const GaussianRational& b) {
        return {a.re_ + b.re_, a.im_ + b.im_};
    }
    friend GaussianRational operator-(const GaussianRational& a, const GaussianRational& b) {
        return {a.re_ - b.re_, a.im_ - b.im_};
    }
    friend GaussianRational operator-(const GaussianRational& a) { return {-a.re_, -a.im_}; }
    friend GaussianRational operator*(const GaussianRational& a, const GaussianRational& b) {
        return {a.re_ * b.re_ - a.im_ * b.im_, a.re_ * b.im_ + a.im_ * b.re_};
    }
    friend GaussianRational operator/(const GaussianRational& a, const GaussianRational& b) {
        const Rational d = b.norm_sq();
        if (d == 0)
            throw std::domain_error("GaussianRational: division by zero");
        const GaussianRational num = a * b.conj();
        return {num.re_ / d, num.im_ / d};
    }
    GaussianRational& operator+=(const GaussianRational& o) { return *this = *this + o; }
    GaussianRational& operator-=(const GaussianRational& o) { return *this = *this - o; }
    GaussianRational& operator*=(const GaussianRational& o) { return *this = *this * o; }

    friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
        return a.re_ == b.re_ && a.im_ == b.im_;
    }

    [[nodiscard]] std::complex<double> to_complex() const {
        return {static_cast<double>(re_), static_cast<double>(im_)};
    }

private:
    Rational re_{0};
    Rational im_{0};
};

inline std::string rational_string(const Rational& q) {
    std::ostringstream os;
    os << boost::multiprecision::numerator(q);
    if (boost::multiprecision::denominator(q) != 1)
        os << '/' << boost::multiprecision::denominator(q);
    return os.str();
}

/// Compact display: "4", "2i", "-i", "1/2-3/4i".
inline std::string to_string(const GaussianRational& z) {
    if (z.is_zero())
        return "0";
    std::string out;
    if (z.re() != 0)
        out = rational_string(z.re());
    if (z.im() != 0) {
        std::string im;
        if (z.im() == 1)
            im = "i";
        else if (z.im() == -1)
            im = "-i";
        else
            im = rational_string(z.im()) + "i";
        if (!out.empty() && im.front() != '-')
            out += '+';
        out += im;
    }
    return out;
}

inline std::ostream& operator<<(std::ostream& os, const GaussianRational& z) { return os << to_string(z); }

/// Polynomial in x over Q(i), coefficients indexed by power.
class ComplexPolynomial {
public:
    ComplexPolynomial() = default;
    explicit ComplexPolynomial(std::vector<GaussianRational> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

    [[nodiscard]] const std::vector<GaussianRational>& coeffs() const { return coeffs_; }
    [[nodiscard]] bool is_zero() const { return coeffs_.empty(); }
    /// Degree; -1 for the zero polynomial.
    [[nodiscard]] int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    [[nodiscard]] GaussianRational coeff(std::size_t k) const {
        return k < coeffs_.size() ? coeffs_[k] : GaussianRational{};
    }
    [[nodiscard]] GaussianRational leading() const { return is_zero() ? GaussianRational{} : coeffs_.back(); }

    [[nodiscard]] ComplexPolynomial derivative() const {
        std::vector<GaussianRational> d;
        for (std::size_t k = 1; k < coeffs_.size(); ++k)
            d.push_back(coeffs_[k] * GaussianRational(static_cast<long long>(k)));
        return ComplexPolynomial(std::move(d));
    }
    [[nodiscard]] ComplexPolynomial times_x() const {
        if (is_zero())
            return {};
        std::vector<GaussianRational> d;
        d.reserve(coeffs_.size() + 1);
        d.emplace_back();
        d.insert(d.end(), coeffs_.begin(), coeffs_.end());
        return ComplexPolynomial(std::move(d));
    }
    [[nodiscard]] ComplexPolynomial conj() const {
        std::vector<GaussianRational> d;
        d.reserve(coeffs_.size());
        for (const auto& c : coeffs_)
            d.push_back(c.conj());
        return ComplexPolynomial(std::move(d));
    }

    friend ComplexPolynomial operator+(const ComplexPolynomial& a, const ComplexPolynomial& b) {
        std::vector<GaussianRational> d(std::max(a.coeffs_.size(), b.coeffs_.size()));
        for (std::size_t k = 0; k < d.size(); ++k)
            d[k] = a.coeff(k) + b.coeff(k);
        return ComplexPolynomial(std::move(d));
    }
    friend ComplexPolynomial operator*(const GaussianRational& s, const ComplexPolynomial& p) {
        std::vector<GaussianRational> d;
        d.reserve(p.coeffs_.size());
        for (const auto& c : p.coeffs_)
            d.push_back(s * c);
        return ComplexPolynomial(std::move(d));
    }
    friend ComplexPolynomial operator*(const ComplexPolynomial& a, const ComplexPolynomial& b) {
        if (a.is_zero() || b.is_zero())
            return {};
        std::vector<GaussianRational> d(a.coeffs_.size() + b.coeffs_.size() - 1);
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
            for (std::size_t j = 0; j < b.coeffs_.size(); ++j)
                d[i + j] += a.coeffs_[i] * b.coeffs_[j];
        return ComplexPolynomial(std::move(d));
    }
    friend bool operator==(const ComplexPolynomial& a, const ComplexPolynomial& b) { return a.coeffs_ == b.coeffs_; }

    [[nodiscard]] std::complex<double> evaluate(double x) const {
        std::complex<double> acc{0.0, 0.0};
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it)
            acc = acc * x + it->to_complex();
        return acc;
    }

private:
    void trim() {
        while (!coeffs_.empty() && coeffs_.back().is_zero())
            coeffs_.pop_back();
    }
    std::vector<GaussianRational> coeffs_;
};

enum class HalfBranch { Ket, Bra };

inline std::string to_string(HalfBranch b) { return b == HalfBranch::Ket ? "ket" : "bra"; }

/// Prefactor of an eigenfunction kept as exponents:
///   2^{-half_power_of_two/2} * exp(i*pi*eighth_turns/4) / sqrt(factorial) / sqrt(N)
/// where N = sqrt(pi/i) for kets and sqrt(pi/-i) for bras (`sqrt_pi_over_i` true
/// selects the ket normalization).
struct NormMeta {
    int half_power_of_two = 0;
    int eighth_turns = 0;
    BigInt factorial = 1;
    bool sqrt_pi_over_i = true;
};

struct EigenfunctionHalf {
    HalfBranch branch = HalfBranch::Ket;
    std::size_t n = 0;
    ComplexPolynomial poly;
    NormMeta norm_meta;
};

inline BigInt factorial(std::size_t n) {
    BigInt f = 1;
    for (std::size_t k = 2; k <= n; ++k)
        f *= static_cast<unsigned long long>(k);
    return f;
}

namespace detail {

/// One raising step: (x + i d/dx) on P e^{-ix^2/2} gives (2xP + iP') e^{-ix^2/2};
/// (x - i d/dx) on Q e^{+ix^2/2} gives (2xQ - iQ') e^{+ix^2/2}.
inline ComplexPolynomial raise_once(const ComplexPolynomial& p, HalfBranch branch) {
    const GaussianRational d_coeff = branch == HalfBranch::Ket ? GaussianRational(0, 1) : GaussianRational(0, -1);
    return GaussianRational(2) * p.times_x() + d_coeff * p.derivative();
}

/// The lowering partner: (x - i d/dx) on P e^{-ix^2/2} gives -iP' e^{-ix^2/2};
/// (x + i d/dx) on Q e^{+ix^2/2} gives iQ' e^{+ix^2/2}.
inline ComplexPolynomial lower_once(const ComplexPolynomial& p, HalfBranch branch) {
    const GaussianRational d_coeff = branch == HalfBranch::Ket ? GaussianRational(0, -1) : GaussianRational(0, 1);
    return d_coeff * p.derivative();
}

} // namespace detail

inline EigenfunctionHalf generate_polynomial(HalfBranch branch, std::size_t n) {
    ComplexPolynomial p(std::vector<GaussianRational>{GaussianRational(1)});
    for (std::size_t k = 0; k < n; ++k)
        p = detail::raise_once(p, branch);
    EigenfunctionHalf half;
    half.branch = branch;
    half.n = n;
    half.poly = std::move(p);
    half.norm_meta.half_power_of_two = static_cast<int>(n);
    // (sqrt(i))^n for both; the bra additionally divides by i^n = (sqrt(i))^{2n}.
    half.norm_meta.eighth_turns = branch == HalfBranch::Ket ? static_cast<int>(n) : -static_cast<int>(n);
    half.norm_meta.factorial = factorial(n);
    half.norm_meta.sqrt_pi_over_i = branch == HalfBranch::Ket;
    return half;
}

/// c_k with  integral x^{2k} e^{-i x^2} dx = c_k sqrt(pi/i)  (epsilon-regularized):
/// c_k = (2k-1)!! / (2i)^k.
inline GaussianRational fresnel_moment(std::size_t k) {
    GaussianRational c(1);
    const GaussianRational two_i(0, 2);
    for (std::size_t j = 0; j < k; ++j)
        c = c * GaussianRational(static_cast<long long>(2 * j + 1)) / two_i;
    return c;
}

/// Moment table c_0..c_{count-1} built by the recurrence c_{k+1} = c_k (2k+1)/(2i).
class MomentTable {
public:
    explicit MomentTable(std::size_t count) {
        values_.reserve(count);
        if (count == 0)
            return;
        values_.emplace_back(1);
        const GaussianRational two_i(0, 2);
        for (std::size_t k = 1; k < count; ++k)
            values_.push_back(values_.back() * GaussianRational(static_cast<long long>(2 * k - 1)) / two_i);
    }
    [[nodiscard]] const GaussianRational& even(std::size_t k) const { return values_.at(k); }
    [[nodiscard]] std::size_t size() const { return values_.size(); }
    /// Moment of x^power against e^{-ix^2}, in units of sqrt(pi/i); zero for odd powers.
    [[nodiscard]] GaussianRational moment(std::size_t power) const {
        if (power % 2 == 1)
            return {};
        return even(power / 2);
    }

private:
    std::vector<GaussianRational> values_;
};

/// Exact value coeff * sqrt(radicand) with a squarefree positive integer radicand.
struct RadicalValue {
    GaussianRational coeff;
    BigInt radicand = 1;

    [[nodiscard]] bool is_rational() const { return radicand == 1 || coeff.is_zero(); }
    [[nodiscard]] std::complex<double> to_complex() const {
        return coeff.to_complex() * std::sqrt(static_cast<double>(radicand));
    }
};

namespace detail {

/// Split a positive integer into square * squarefree part.
inline std::pair<BigInt, BigInt> square_split(BigInt value) {
    BigInt root = 1;
    BigInt rest = 1;
    for (BigInt p = 2; p * p <= value; ++p) {
        int count = 0;
        while (value % p == 0) {
            value /= p;
            ++count;
        }
        for (int k = 0; k < count / 2; ++k)
            root *= p;
        if (count % 2 == 1)
            rest *= p;
    }
    rest *= value;
    return {root, rest};
}

inline GaussianRational i_power(int k) {
    switch (((k % 4) + 4) % 4) {
    case 0: return {1, 0};
    case 1: return {0, 1};
    case 2: return {-1, 0};
    default: return {0, -1};
    }
}

} // namespace detail

/// Exact integral of conj(psi_{l,m}) * psi_{r,n} over the real line.
///
/// conj(Q_m) = P_m, so the integrand is P_m P_n e^{-ix^2} times prefactors; the
/// sqrt(pi/i) from the moments cancels against 1/(conj(sqrt N_l) sqrt N_r) exactly.
inline RadicalValue inner_product(std::size_t m, std::size_t n) {
    const EigenfunctionHalf bra = generate_polynomial(HalfBranch::Bra, m);
    const EigenfunctionHalf ket = generate_polynomial(HalfBranch::Ket, n);
    const ComplexPolynomial integrand = bra.poly.conj() * ket.poly;
    const MomentTable moments(m + n + 1);
    GaussianRational sum;
    for (std::size_t k = 0; k < integrand.coeffs().size(); ++k)
        sum += integrand.coeffs()[k] * moments.moment(k);
    if (sum.is_zero() || (m + n) % 2 == 1)
        return {GaussianRational{}, 1};

    // conj(bra phase) * ket phase in eighth turns; m + n even keeps it a power of i.
    const int eighths = -bra.norm_meta.eighth_turns + ket.norm_meta.eighth_turns;
    GaussianRational value = sum * detail::i_power(eighths / 2);
    // 2^{-(m+n)/2} / sqrt(m! n!)
    value = value / GaussianRational(Rational(BigInt(1) << static_cast<unsigned>((m + n) / 2)));
    const auto [root, rest] = detail::square_split(bra.norm_meta.factorial * ket.norm_meta.factorial);
    value = value / GaussianRational(Rational(root));
    // 1/sqrt(rest) = sqrt(rest)/rest
    value = value / GaussianRational(Rational(rest));
    return {value, rest};
}

struct LadderCheck {
    std::size_t n = 0;
    bool lower_matches = false;   ///< b- psi_{r,n} proportional to psi_{r,n-1} (or zero at n = 0)
    bool raise_matches = false;   ///< b+ psi_{r,n} proportional to psi_{r,n+1}
    GaussianRational lower_factor_sq; ///< expected n
    GaussianRational raise_factor_sq; ///< expected n + 1
    bool bra_lower_matches = false;   ///< b+ psi_{l,n} proportional to psi_{l,n-1}
    bool bra_raise_matches = false;   ///< b- psi_{l,n} proportional to psi_{l,n+1}
    GaussianRational bra_lower_factor_sq; ///< expected -n
    GaussianRational bra_raise_factor_sq; ///< expected -(n + 1)
};

namespace detail {

/// lambda with a = lambda * b coefficient-wise, if it exists.
inline std::optional<GaussianRational> proportionality(const ComplexPolynomial& a, const ComplexPolynomial& b) {
    if (a.degree() != b.degree() || b.is_zero())
        return std::nullopt;
    const GaussianRational lambda = a.leading() / b.leading();
    if (!(lambda * b == a))
        return std::nullopt;
    return lambda;
}

/// Squared ladder factor per unit proportionality constant: the ladder operator
/// carries sqrt(i/2), so factor^2 = lambda^2 * (i/2) * (pref_from / pref_to)^2.
inline GaussianRational step_factor_sq(const EigenfunctionHalf& from, const EigenfunctionHalf& to) {
    // (exp(i pi de/4))^2 = i^de
    GaussianRational ratio_sq = i_power(from.norm_meta.eighth_turns - to.norm_meta.eighth_turns);
    // (2^{-dh/2})^2 = 2^{-dh}
    const int dh = from.norm_meta.half_power_of_two - to.norm_meta.half_power_of_two;
    const Rational two_pow(BigInt(1) << static_cast<unsigned>(std::abs(dh)));
    ratio_sq = dh >= 0 ? ratio_sq / GaussianRational(two_pow) : ratio_sq * GaussianRational(two_pow);
    // (sqrt(f_to / f_from))^2
    ratio_sq = ratio_sq * GaussianRational(Rational(to.norm_meta.factorial, from.norm_meta.factorial));
    return GaussianRational(Rational(0), Rational(1, 2)) * ratio_sq;
}

} // namespace detail

/// Apply the coordinate ladder operators b- = sqrt(i/2)(x - i d/dx) and
/// b+ = sqrt(i/2)(x + i d/dx) to the exact eigenfunctions and report the squared
/// proportionality factors. Squares stay in Q(i).
inline LadderCheck ladder_action_check(std::size_t n) {
    LadderCheck out;
    out.n = n;
    const EigenfunctionHalf ket = generate_polynomial(HalfBranch::Ket, n);
    const EigenfunctionHalf ket_up = generate_polynomial(HalfBranch::Ket, n + 1);

    const ComplexPolynomial raised = detail::raise_once(ket.poly, HalfBranch::Ket);
    if (auto lambda = detail::proportionality(raised, ket_up.poly)) {
        out.raise_factor_sq = (*lambda) * (*lambda) * detail::step_factor_sq(ket, ket_up);
        out.raise_matches = out.raise_factor_sq == GaussianRational(static_cast<long long>(n + 1));
    }
    const ComplexPolynomial lowered = detail::lower_once(ket.poly, HalfBranch::Ket);
    if (n == 0) {
        out.lower_matches = lowered.is_zero();
        out.lower_factor_sq = GaussianRational{};
    } else {
        const EigenfunctionHalf ket_down = generate_polynomial(HalfBranch::Ket, n - 1);
        if (auto lambda = detail::proportionality(lowered, ket_down.poly)) {
            out.lower_factor_sq = (*lambda) * (*lambda) * detail::step_factor_sq(ket, ket_down);
            out.lower_matches = out.lower_factor_sq == GaussianRational(static_cast<long long>(n));
        }
    }

    const EigenfunctionHalf bra = generate_polynomial(HalfBranch::Bra, n);
    const EigenfunctionHalf bra_up = generate_polynomial(HalfBranch::Bra, n + 1);
    const ComplexPolynomial bra_raised = detail::raise_once(bra.poly, HalfBranch::Bra);
    if (auto lambda = detail::proportionality(bra_raised, bra_up.poly)) {
        out.bra_raise_factor_sq = (*lambda) * (*lambda) * detail::step_factor_sq(bra, bra_up);
        out.bra_raise_matches = out.bra_raise_factor_sq == GaussianRational(-static_cast<long long>(n + 1));
    }
    const ComplexPolynomial bra_lowered = detail::lower_once(bra.poly, HalfBranch::Bra);
    if (n == 0) {
        out.bra_lower_matches = bra_lowered.is_zero();
    } else {
        const EigenfunctionHalf bra_down = generate_polynomial(HalfBranch::Bra, n - 1);
        if (auto lambda = detail::proportionality(bra_lowered, bra_down.poly)) {
            out.bra_lower_factor_sq = (*lambda) * (*lambda) * detail::step_factor_sq(bra, bra_down);
            out.bra_lower_matches = out.bra_lower_factor_sq == GaussianRational(-static_cast<long long>(n));
        }
    }
    return out;
}

/// Floating prefactor (sqrt(i/2))^n / (phase sqrt(n!)) / sqrt(N).
inline std::complex<double> prefactor(const EigenfunctionHalf& half) {
    const NormMeta& m = half.norm_meta;
    const double pi = std::numbers::pi;
    // 1/sqrt(N_r) = pi^{-1/4} e^{+i pi/8};  1/sqrt(N_l) = pi^{-1/4} e^{-i pi/8}
    const double norm_phase = m.sqrt_pi_over_i ? pi / 8.0 : -pi / 8.0;
    const double phase = pi * m.eighth_turns / 4.0 + norm_phase;
    double magnitude = std::pow(2.0, -0.5 * m.half_power_of_two) * std::pow(pi, -0.25);
    magnitude /= std::sqrt(static_cast<double>(m.factorial));
    return std::polar(magnitude, phase);
}

/// psi(sqrt(freq) x) * freq^{1/4}, Gaussian phase e^{-/+ i freq x^2 / 2}.
inline std::complex<double> evaluate(const EigenfunctionHalf& half, double x, double freq) {
    if (!(freq > 0.0))
        throw ParameterError("evaluate: frequency must be positive");
    const double y = std::sqrt(freq) * x;
    const double sign = half.branch == HalfBranch::Ket ? -1.0 : 1.0;
    const std::complex<double> gauss = std::polar(1.0, sign * 0.5 * y * y);
    return prefactor(half) * half.poly.evaluate(y) * gauss * std::pow(freq, 0.25);
}

/// rho_{r,l}(x) = psi_{r,n}(x) * conj(psi_{l,n}(x)).
inline std::complex<double> density(std::size_t n, double x, double freq) {
    const EigenfunctionHalf ket = generate_polynomial(HalfBranch::Ket, n);
    const EigenfunctionHalf bra = generate_polynomial(HalfBranch::Bra, n);
    return evaluate(ket, x, freq) * std::conj(evaluate(bra, x, freq));
}

/// rho_{l,r}(x) = psi_{l,n}(x) * conj(psi_{r,n}(x)) = conj(rho_{r,l}(x)).
inline std::complex<double> density_dual(std::size_t n, double x, double freq) {
    const EigenfunctionHalf ket = generate_polynomial(HalfBranch::Ket, n);
    const EigenfunctionHalf bra = generate_polynomial(HalfBranch::Bra, n);
    return evaluate(bra, x, freq) * std::conj(evaluate(ket, x, freq));
}

} // namespace invosc::exact
