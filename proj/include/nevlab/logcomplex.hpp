#ifndef NEVLAB_LOGCOMPLEX_HPP
#define NEVLAB_LOGCOMPLEX_HPP

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

namespace nevlab {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Complex scalar in log-polar form: value = exp(log_mag) * e^{i*phase}.
// log_mag == -inf encodes an exact zero; its phase is pinned to 0 so that
// max-modulus scans get a total order. Radii like e^324 or e^1e10 only ever
// appear as log_mag, never exponentiated.
struct LogComplex {
    double log_mag = kNegInf;
    double phase = 0.0;
};

// Wraps into (-pi, pi].
inline double wrap_phase(double t) {
    if (t > -kPi && t <= kPi) return t;
    double r = std::remainder(t, 2.0 * kPi);
    if (r <= -kPi) r = kPi;
    return r;
}

inline bool lc_is_zero(const LogComplex& a) { return a.log_mag == kNegInf; }

inline LogComplex lc_zero() { return {kNegInf, 0.0}; }
inline LogComplex lc_one() { return {0.0, 0.0}; }

inline LogComplex lc_from_polar(double log_mag, double phase) {
    if (log_mag == kNegInf) return lc_zero();
    return {log_mag, wrap_phase(phase)};
}

inline LogComplex lc_from(const std::complex<double>& w) {
    double m = std::abs(w);
    if (m == 0.0) return lc_zero();
    return {std::log(m), std::atan2(w.imag(), w.real())};
}

inline LogComplex lc_from_real(double x) {
    if (x == 0.0) return lc_zero();
    return {std::log(std::abs(x)), x > 0.0 ? 0.0 : kPi};
}

// Value exp(e) for an ordinary complex exponent e; exact in log form.
inline LogComplex lc_exp_of(const std::complex<double>& e) {
    return {e.real(), wrap_phase(e.imag())};
}

inline std::complex<double> to_complex(const LogComplex& a) {
    if (lc_is_zero(a)) return {0.0, 0.0};
    return std::polar(std::exp(a.log_mag), a.phase);
}

inline LogComplex lc_mul(const LogComplex& a, const LogComplex& b) {
    if (lc_is_zero(a) || lc_is_zero(b)) return lc_zero();
    return {a.log_mag + b.log_mag, wrap_phase(a.phase + b.phase)};
}

inline LogComplex lc_inv(const LogComplex& a) {
    return {-a.log_mag, wrap_phase(-a.phase)};
}

inline LogComplex lc_div(const LogComplex& a, const LogComplex& b) {
    if (lc_is_zero(a)) return lc_zero();
    return {a.log_mag - b.log_mag, wrap_phase(a.phase - b.phase)};
}

inline LogComplex lc_neg(const LogComplex& a) {
    if (lc_is_zero(a)) return lc_zero();
    return {a.log_mag, wrap_phase(a.phase + kPi)};
}

inline LogComplex lc_conj(const LogComplex& a) {
    if (lc_is_zero(a)) return lc_zero();
    return {a.log_mag, wrap_phase(-a.phase)};
}

// a^n for integer n; 0^0 = 1 by convention.
inline LogComplex lc_pow_int(const LogComplex& a, long n) {
    if (n == 0) return lc_one();
    if (lc_is_zero(a)) return n > 0 ? lc_zero() : LogComplex{std::numeric_limits<double>::infinity(), 0.0};
    return {static_cast<double>(n) * a.log_mag, wrap_phase(static_cast<double>(n) * a.phase)};
}

// Exact complex sum, formed by factoring out the larger modulus so that the
// ratio lives in ordinary arithmetic with |ratio| <= 1.
inline LogComplex lc_add(const LogComplex& a, const LogComplex& b) {
    if (lc_is_zero(a)) return b;
    if (lc_is_zero(b)) return a;
    if (a.log_mag == b.log_mag && wrap_phase(a.phase - b.phase + kPi) == 0.0)
        return lc_zero();  // exact cancellation
    const LogComplex& big = (a.log_mag >= b.log_mag) ? a : b;
    const LogComplex& small = (a.log_mag >= b.log_mag) ? b : a;
    std::complex<double> s =
        1.0 + std::polar(std::exp(small.log_mag - big.log_mag), small.phase - big.phase);
    double m = std::abs(s);
    if (m == 0.0) return lc_zero();
    return {big.log_mag + std::log(m), wrap_phase(big.phase + std::arg(s))};
}

inline LogComplex lc_sub(const LogComplex& a, const LogComplex& b) {
    return lc_add(a, lc_neg(b));
}

// log|1 - w|. Exact zero at w == 1 returns -inf (a point landing on a zero).
//
// Branches: |w| >= e uses log|w| + log|1 - 1/w|; |w| <= e^-37 uses the first
// series term -Re w; otherwise |1-w|^2 = (1-|w|)^2 + 4|w| sin^2(phase/2),
// a sum of two nonnegative terms with no cancellation.
inline double log_abs_one_minus(const LogComplex& w) {
    if (lc_is_zero(w)) return 0.0;
    if (w.log_mag > 0.0) return w.log_mag + log_abs_one_minus(lc_inv(w));
    if (w.log_mag < -37.0) return -std::exp(w.log_mag) * std::cos(w.phase);
    double a = std::expm1(w.log_mag);  // |w| - 1 <= 0
    double s = std::sin(0.5 * w.phase);
    double t = a * a + 4.0 * std::exp(w.log_mag) * s * s;
    if (t == 0.0) return kNegInf;
    return 0.5 * std::log(t);
}

// 1 - w as a LogComplex. Same branch structure as log_abs_one_minus; the
// real part 1 - |w|cos(phase) is assembled as (1-|w|) + 2|w|sin^2(phase/2),
// both nonnegative for |w| <= 1.
inline LogComplex lc_one_minus(const LogComplex& w) {
    if (lc_is_zero(w)) return lc_one();
    if (w.log_mag > 0.0) return lc_mul(lc_neg(w), lc_one_minus(lc_inv(w)));
    double ew = std::exp(w.log_mag);
    double a = std::expm1(w.log_mag);
    double s = std::sin(0.5 * w.phase);
    double t = a * a + 4.0 * ew * s * s;
    if (t == 0.0) return lc_zero();
    double re = -a + 2.0 * ew * s * s;
    double im = -ew * std::sin(w.phase);
    return {0.5 * std::log(t), std::atan2(im, re)};
}

// log(1 + w) as an ordinary complex number (principal branch): the factor
// logarithm used when accumulating products. Finite only for w != -1.
inline std::complex<double> log1p_lc(const LogComplex& w) {
    LogComplex mw = lc_neg(w);
    return {log_abs_one_minus(mw), lc_one_minus(mw).phase};
}

}  // namespace nevlab

#endif
