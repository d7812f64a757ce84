#include "nevlab/products.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "nevlab/kernels.hpp"
#include "nevlab/zeta.hpp"

namespace nevlab {

namespace {

using cd = std::complex<double>;

constexpr double kLn2 = 0.6931471805599453094172321214581766;
constexpr std::size_t kNoSkip = std::numeric_limits<std::size_t>::max();
constexpr double kEmHead = 2000.0;  // explicit factors ahead of any Euler-Maclaurin block

struct CLog {
    double re = 0.0;
    double im = 0.0;
};

// log(1 - w), both parts, sharing the branch work. re == -inf marks w == 1.
CLog log1m_full(double lm, double ph) {
    if (lm == kNegInf) return {0.0, 0.0};
    if (lm > 0.0) {
        CLog inner = log1m_full(-lm, wrap_phase(-ph));
        return {lm + inner.re, wrap_phase(ph + kPi) + inner.im};
    }
    if (lm < -37.0) {
        double ew = std::exp(lm);
        return {-ew * std::cos(ph), std::atan2(-ew * std::sin(ph), 1.0 - ew * std::cos(ph))};
    }
    double ew = std::exp(lm);
    double a = std::expm1(lm);
    double s = std::sin(0.5 * ph);
    double t = a * a + 4.0 * ew * s * s;
    if (t == 0.0) return {kNegInf, 0.0};
    return {0.5 * std::log(t), std::atan2(-ew * std::sin(ph), -a + 2.0 * ew * s * s)};
}

double log1m_re(double lm, double ph) { return log_abs_one_minus({lm, ph}); }

// log((1 - w) e_p(w)); genus terms sum_{j<=p} w^j/j added in ordinary form.
CLog factor_log(int p, double lm, double ph, bool need_phase) {
    CLog out = need_phase ? log1m_full(lm, ph) : CLog{log1m_re(lm, ph), 0.0};
    if (out.re == kNegInf) return out;
    for (int j = 1; j <= p; ++j) {
        double e = j * lm;
        if (e > 705.0)
            throw NumericError("weierstrass_factor", "genus exponent exceeds double range");
        double mag = std::exp(e) / j;
        out.re += mag * std::cos(j * ph);
        if (need_phase) out.im += mag * std::sin(j * ph);
    }
    return out;
}

double harmonic(int p) {
    double h = 0.0;
    for (int j = 1; j <= p; ++j) h += 1.0 / j;
    return h;
}

// ---------------------------------------------------------------------------
// Generic enumerated path. Stops once the certified tail bound
// 2 r^{p+1} sum_{n>=k} |z_n|^{-(p+1)} drops below trunc_tol.

ProductEval generic_eval(const CanonicalProduct& f, const LogComplex& z, std::size_t skip,
                         bool need_phase) {
    const ZeroSequence& seq = *f.zeros;
    const double ltol = std::log(f.trunc_tol);
    const double log_r = z.log_mag;
    cd S{0.0, 0.0};
    double abs_re = 0.0;
    std::int64_t terms = 0;
    double tail = 0.0;
    bool certified = false;
    double last_bound = std::numeric_limits<double>::infinity();

    std::size_t partner = kNoSkip;
    CLog partner_factor{};
    if (skip != kNoSkip) {
        if (auto pr = seq.pair(skip)) {
            partner = pr->partner;
            partner_factor.re = pr->log_gap - seq.log_modulus(partner);
            partner_factor.im = partner > skip ? 0.0 : kPi;
        }
    }

    const std::size_t cap = seq.enum_cap();
    for (std::size_t k = 0; k < cap; ++k) {
        if (k == skip) continue;
        LogComplex zk = seq.point_lc(k);
        LogComplex w = lc_div(z, zk);
        if (w.log_mag <= -kLn2) {
            double lt = kLn2 + (f.genus + 1.0) * log_r + seq.recip_power_tail_log(k, f.genus + 1.0);
            last_bound = std::exp(lt);
            if (lt <= ltol) {
                tail = last_bound;
                certified = true;
                break;
            }
        }
        CLog fl;
        if (k == partner) {
            fl = partner_factor;
            for (int j = 1; j <= f.genus; ++j) {  // e_p(w) with w ~ 1
                double mag = std::exp(j * w.log_mag) / j;
                fl.re += mag * std::cos(j * w.phase);
                if (need_phase) fl.im += mag * std::sin(j * w.phase);
            }
        } else {
            fl = factor_log(f.genus, w.log_mag, w.phase, need_phase);
        }
        if (fl.re == kNegInf) return {lc_zero(), 0.0, terms, false};
        S += cd{fl.re, fl.im};
        abs_re += std::abs(fl.re);
        if (++terms >= f.max_terms)
            throw TruncationError("eval_product",
                                  {S.real(), wrap_phase(S.imag())}, last_bound);
    }
    if (!certified) {
        if (seq.is_finite()) {
            tail = 0.0;
        } else {
            throw TruncationError("eval_product", {S.real(), wrap_phase(S.imag())}, last_bound);
        }
    }
    double err = tail + 4e-16 * abs_re;
    return {{S.real(), wrap_phase(S.imag())}, err, terms, false};
}

// ---------------------------------------------------------------------------
// Anderson-Clunie path: per-circle angle loops (the hot loop), then the
// remaining circles are controlled by a single tail bound.

double ac_circle_tail_log(const ACZeros& ac, std::size_t from_circle, double s) {
    double hi = kNegInf;
    std::vector<double> t;
    for (std::size_t m = from_circle; m < ac.n_circles(); ++m)
        t.push_back(std::log(ac.circle_count(m)) - s * ac.circle_log_b(m));
    t.push_back(ac.beyond_tail_log(s));
    for (double x : t) hi = std::max(hi, x);
    double acc = 0.0;
    for (double x : t) acc += std::exp(x - hi);
    return hi + std::log(acc);
}

ProductEval ac_eval(const ACZeros& ac, const CanonicalProduct& f, const LogComplex& z,
                    std::size_t skip, bool need_phase) {
    const double ltol = std::log(f.trunc_tol);
    const double log_r = z.log_mag;
    const double theta = z.phase;
    cd S{0.0, 0.0};
    std::int64_t terms = 0;
    double tail = 0.0;
    bool certified = false;
    double last_bound = std::numeric_limits<double>::infinity();

    std::size_t skip_circle = kNoSkip, skip_off = 0;
    if (skip != kNoSkip) {
        std::size_t i = 0, off = skip;
        while (i < ac.n_circles() && ac.circle_materialized(i) &&
               off >= ac.circle_angles(i).size()) {
            off -= ac.circle_angles(i).size();
            ++i;
        }
        skip_circle = i;
        skip_off = off;
    }

    for (std::size_t i = 0; i < ac.n_circles(); ++i) {
        double lb = ac.circle_log_b(i);
        if (lb >= log_r + kLn2) {
            double lt = kLn2 + log_r + ac_circle_tail_log(ac, i, 1.0);
            last_bound = std::exp(lt);
            if (lt <= ltol) {
                tail = last_bound;
                certified = true;
                break;
            }
        }
        if (!ac.circle_materialized(i))
            throw TruncationError("eval_product", {S.real(), wrap_phase(S.imag())}, last_bound);
        auto angles = ac.circle_angles(i);
        const double lm = log_r - lb;
        const std::size_t soff = (i == skip_circle) ? skip_off : kNoSkip;

        if (lm == 0.0) {  // z on this circle: exact zero hit?
            for (std::size_t j = 0; j < angles.size(); ++j) {
                if (j == soff) continue;
                if (wrap_phase(theta - angles[j]) == 0.0) return {lc_zero(), 0.0, terms, false};
            }
        }
        if (need_phase) {
            kernels::Sum2 cs = kernels::block_sum2(angles.size(), [&](std::size_t j) {
                if (j == soff) return kernels::Sum2{0.0, 0.0};
                CLog fl = log1m_full(lm, wrap_phase(theta - angles[j]));
                return kernels::Sum2{fl.re, fl.im};
            });
            S += cd{cs.a, cs.b};
        } else {
            double cs = kernels::block_sum(angles.size(), [&](std::size_t j) {
                if (j == soff) return 0.0;
                return log1m_re(lm, wrap_phase(theta - angles[j]));
            });
            S += cd{cs, 0.0};
        }
        terms += static_cast<std::int64_t>(angles.size());
        if (terms >= f.max_terms && i + 1 < ac.n_circles())
            throw TruncationError("eval_product", {S.real(), wrap_phase(S.imag())}, last_bound);
    }
    if (!certified) {
        double lt = kLn2 + log_r + ac.beyond_tail_log(1.0);
        last_bound = std::exp(lt);
        if (lt <= ltol) {
            tail = last_bound;
        } else {
            throw TruncationError("eval_product", {S.real(), wrap_phase(S.imag())}, last_bound);
        }
    }
    if (!std::isfinite(S.real()) && S.real() != kNegInf)
        throw NumericError("eval_product", "non-finite accumulation in circle sums");
    if (S.real() == kNegInf) return {lc_zero(), 0.0, terms, false};
    double err = tail + 4e-16 * (std::abs(S.real()) + static_cast<double>(terms));
    return {{S.real(), wrap_phase(S.imag())}, err, terms, false};
}

// ---------------------------------------------------------------------------
// Lindelof path. z_k = -k^{alpha}; the factor logarithm expands as
// log((1-w)e_p(w)) = -sum_{j>p} w^j/j, so the tail over k > K is
// -sum_{j>p} ((-z)^j / j) zeta(alpha j, K+1), geometric in j once
// (K+1)^alpha >= 2r.

struct LindParams {
    double rho;
    double alpha;
    int p;
};

cd lind_zeta_tail(const LindParams& P, const LogComplex& z, double from, double tol, double& err) {
    const double log_r = z.log_mag;
    const double psi = wrap_phase(z.phase + kPi);  // arg(-z)
    const double lq = log_r - P.alpha * std::log(from + 1.0);
    if (lq > -0.05)
        throw NumericError("eval_product", "zeta tail started before |z/z_n| <= 1/2");
    const double q = std::exp(lq);
    cd acc{0.0, 0.0};
    double stop = std::max(tol * 0.25, 1e-300);
    for (int j = P.p + 1; j <= P.p + 600; ++j) {
        double lt = j * log_r + log_hurwitz_zeta(P.alpha * j, from + 1.0) - std::log(double(j));
        if (lt > 700.0) throw NumericError("eval_product", "zeta tail term exceeds double range");
        double mag = std::exp(lt);
        acc -= std::polar(mag, j * psi);
        if (mag < stop) {
            err += mag * q / (1.0 - q);
            return acc;
        }
    }
    throw NumericError("eval_product", "zeta tail failed to converge");
}

// explicit factors k = a..b (1-based), skipping skip1 when nonzero
cd lind_head(const LindParams& P, const LogComplex& z, std::size_t a, std::size_t b,
             std::size_t skip1, bool need_phase, double& err) {
    if (b < a) return {0.0, 0.0};
    const double log_r = z.log_mag;
    const double psi = wrap_phase(z.phase - kPi);  // arg of z / z_k
    const std::size_t n = b - a + 1;
    kernels::Sum2 s;
    if (need_phase) {
        s = kernels::block_sum2(n, [&](std::size_t i) {
            std::size_t k = a + i;
            if (k == skip1) return kernels::Sum2{0.0, 0.0};
            double lm = log_r - P.alpha * std::log(static_cast<double>(k));
            CLog fl = factor_log(P.p, lm, psi, true);
            return kernels::Sum2{fl.re, fl.im};
        });
    } else {
        double re = kernels::block_sum(n, [&](std::size_t i) {
            std::size_t k = a + i;
            if (k == skip1) return 0.0;
            double lm = log_r - P.alpha * std::log(static_cast<double>(k));
            return factor_log(P.p, lm, psi, false).re;
        });
        s = {re, 0.0};
    }
    err += 4e-16 * (std::abs(s.a) + static_cast<double>(n));
    return {s.a, s.b};
}

// adaptive Simpson on a complex integrand over [a, b]
template <class F>
cd adsimp_rec(F& f, double a, double b, cd fa, cd fm, cd fb, cd whole, double eps, int depth,
              double& err) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    cd flm = f(lm), frm = f(rm);
    cd left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    cd right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    cd delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * eps) {
        err += std::abs(delta) / 15.0;
        return left + right + delta / 15.0;
    }
    return adsimp_rec(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1, err) +
           adsimp_rec(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1, err);
}

template <class F>
cd adsimp(F f, double a, double b, double eps, double& err) {
    cd fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    cd whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adsimp_rec(f, a, b, fa, fm, fb, whole, eps, 52, err);
}

// sum_{k=a..b} log(1 + W k^beta) by endpoint Euler-Maclaurin with two
// Bernoulli corrections; boundaries are treated as reals once b exceeds the
// exact-integer range.
cd em_sum_log1p(const LogComplex& W, double beta, double a, double b, double tol, double& err) {
    if (b < a) return {0.0, 0.0};
    auto u = [&](double logx) -> cd {
        LogComplex w{W.log_mag + beta * logx, W.phase};
        return log1p_lc(w);
    };
    auto wval = [&](double x) -> cd {
        return to_complex(LogComplex{W.log_mag + beta * std::log(x), W.phase});
    };
    double la = std::log(a), lb = std::log(b);
    // integral over x, in t = log x
    auto F = [&](double t) -> cd { return u(t) * std::exp(t); };
    double quad_err = 0.0;
    cd coarse = (lb - la) / 6.0 * (F(la) + 4.0 * F(0.5 * (la + lb)) + F(lb));
    double eps = std::max(tol * 0.05, 1e-12 * (1.0 + std::abs(coarse)));
    cd I = adsimp(F, la, lb, eps, quad_err);
    cd ua = u(la), ub = u(lb);
    cd d1a, d3a, d1b, d3b;
    products_detail::em_log_derivs(wval(a), beta, a, d1a, d3a);
    products_detail::em_log_derivs(wval(b), beta, b, d1b, d3b);
    cd corr1 = (d1b - d1a) / 12.0;
    cd corr3 = -(d3b - d3a) / 720.0;
    err += quad_err + std::abs(corr3);
    return I + 0.5 * (ua + ub) + corr1 + corr3;
}

// genus monomials sum_{k=a..b} sum_{j<=p} (-1)^j z^j k^{-alpha j} / j
cd genus_monomials(const LindParams& P, const LogComplex& z, double a, double b) {
    cd S{0.0, 0.0};
    for (int j = 1; j <= P.p; ++j) {
        double Sj = finite_recip_power_sum(P.alpha * j, a, b);
        double lmag = j * z.log_mag + std::log(Sj) - std::log(double(j));
        if (lmag > 700.0) throw NumericError("eval_product", "genus monomial exceeds double range");
        cd c = std::polar(std::exp(lmag), j * z.phase);
        S += (j % 2 == 1) ? -c : c;
    }
    return S;
}

ProductEval lind_eval(const CanonicalProduct& f, const LogComplex& z, std::size_t skip,
                      bool need_phase) {
    const auto& seq = *f.zeros;
    LindParams P{seq.convergence_exponent(), 1.0 / seq.convergence_exponent(), f.genus};
    const double log_r = z.log_mag;
    const double theta = z.phase;

    // exact zero hit (theta == pi after wrapping and r == k^alpha bitwise)
    if (wrap_phase(theta - kPi) == 0.0) {
        double x = std::exp(P.rho * log_r);
        if (x < 4.5e15) {
            auto k0 = static_cast<long long>(std::llround(x));
            for (long long k = std::max(1LL, k0 - 1); k <= k0 + 1; ++k) {
                if (P.alpha * std::log(static_cast<double>(k)) == log_r &&
                    static_cast<std::size_t>(k - 1) != skip)
                    return {lc_zero(), 0.0, 0, false};
            }
        }
    }

    const double budget = static_cast<double>(std::max<std::int64_t>(f.max_terms, 20000));
    double K2 = std::floor(std::exp(P.rho * (log_r + kLn2)));
    if (!(K2 >= 1.0)) K2 = 0.0;
    double err = 0.0;

    if (K2 <= budget) {
        std::size_t k2 = static_cast<std::size_t>(K2);
        std::size_t skip1 = skip == kNoSkip ? 0 : skip + 1;
        cd S = k2 >= 1 ? lind_head(P, z, 1, k2, skip1, need_phase, err) : cd{0.0, 0.0};
        if (!std::isfinite(S.real())) return {lc_zero(), 0.0, static_cast<std::int64_t>(k2), false};
        S += lind_zeta_tail(P, z, K2, f.trunc_tol, err);
        return {{S.real(), wrap_phase(S.imag())}, err, static_cast<std::int64_t>(k2), false};
    }

    if (skip != kNoSkip)
        throw NumericError("derivative_at_zero", "cofactor index beyond the direct budget");
    if (wrap_phase(theta - kPi) == 0.0)
        throw SingularityError("eval_product",
                               "Lindelof evaluation on the zero ray needs the direct path");

    double K1 = std::floor(std::exp(P.rho * (log_r - kLn2)));
    if (!(K1 >= 0.0)) K1 = 0.0;
    double h = std::min(kEmHead, K2);
    cd S = lind_head(P, z, 1, static_cast<std::size_t>(h), 0, need_phase, err);

    if (K1 > h) {
        // |w| >= 2: log(1+z/k^alpha) = log z - alpha log k + log(1 + k^alpha/z)
        double cnt = K1 - h;
        S += cnt * cd{log_r, theta};
        S += -P.alpha * cd{finite_log_sum(h + 1.0, K1), 0.0};
        S += em_sum_log1p(lc_inv(z), P.alpha, h + 1.0, K1, f.trunc_tol, err);
        S += genus_monomials(P, z, h + 1.0, K1);
    }
    double bstart = std::max(K1, h) + 1.0;
    if (K2 >= bstart) {
        S += em_sum_log1p(z, -P.alpha, bstart, K2, f.trunc_tol, err);
        S += genus_monomials(P, z, bstart, K2);
    }
    S += lind_zeta_tail(P, z, K2, f.trunc_tol, err);
    return {{S.real(), wrap_phase(S.imag())}, err, static_cast<std::int64_t>(kEmHead), true};
}

ProductEval dispatch_eval(const CanonicalProduct& f, const LogComplex& z, std::size_t skip,
                          bool need_phase) {
    if (lc_is_zero(z)) return {lc_one(), 0.0, 0, false};
    const ZeroSequence& seq = *f.zeros;
    if (seq.kind() == SeqKind::lindelof) return lind_eval(f, z, skip, need_phase);
    if (const ACZeros* ac = as_ac(seq)) return ac_eval(*ac, f, z, skip, need_phase);
    return generic_eval(f, z, skip, need_phase);
}

}  // namespace

namespace products_detail {

void em_log_derivs(const cd& w, double beta, double x, cd& d1, cd& d3) {
    cd v = w / (1.0 + w);
    d1 = beta * v / x;
    cd g = (beta - 1.0) * v - beta * v * v;
    cd gp = (beta - 1.0) - 2.0 * beta * v;
    d3 = beta / (x * x * x) * (gp * beta * v * (1.0 - v) - 2.0 * g);
}

}  // namespace products_detail

CanonicalProduct make_product(SeqPtr seq, double trunc_tol, std::int64_t max_terms) {
    int g = seq->genus();
    if (g > 64) throw std::domain_error("make_product: genus above the supported cap of 64");
    return {std::move(seq), g, trunc_tol, max_terms};
}

std::complex<double> weierstrass_exponent(int p, const LogComplex& w) {
    cd E{0.0, 0.0};
    if (lc_is_zero(w)) return E;
    for (int j = 1; j <= p; ++j) {
        double e = j * w.log_mag;
        if (e > 705.0)
            throw NumericError("weierstrass_factor", "genus exponent exceeds double range");
        E += std::polar(std::exp(e) / j, j * w.phase);
    }
    return E;
}

LogComplex weierstrass_factor(int p, const LogComplex& w) {
    return lc_exp_of(weierstrass_exponent(p, w));
}

ProductEval eval_product(const CanonicalProduct& f, const LogComplex& z) {
    return dispatch_eval(f, z, kNoSkip, true);
}

ProductEval eval_magnitude(const CanonicalProduct& f, const LogComplex& z) {
    return dispatch_eval(f, z, kNoSkip, false);
}

PolyFactorEval eval_poly_factor(std::int64_t m, double log_b, const LogComplex& z) {
    if (m < 1) throw std::domain_error("eval_poly_factor: m must be >= 1");
    if (lc_is_zero(z)) return {lc_one(), 0.0};
    const double lm = z.log_mag - log_b;
    if (m <= 1'000'000) {
        kernels::Sum2 s = kernels::block_sum2(static_cast<std::size_t>(m), [&](std::size_t j) {
            double phi = ac_angle(m, static_cast<std::int64_t>(j) + 1);
            CLog fl = log1m_full(lm, wrap_phase(z.phase - phi));
            return kernels::Sum2{fl.re, fl.im};
        });
        if (s.a == kNegInf || !std::isfinite(s.a)) return {lc_zero(), 0.0};
        return {{s.a, wrap_phase(s.b)}, 4e-16 * (std::abs(s.a) + static_cast<double>(m))};
    }
    // angle-integral aggregation, positive real z only
    if (z.phase != 0.0)
        throw std::domain_error("eval_poly_factor: integral aggregation needs positive real z");
    auto g = [&](double phi) { return log1m_re(lm, wrap_phase(-phi)); };
    auto gp = [&](double phi) {
        // d/dphi log|1 - R e^{-i phi}| = Re(i u / (1 - u)) = Re(-i / (1 - 1/u))
        cd vinv = std::polar(std::exp(-lm), phi);  // 1/u
        if (lm <= 1.0) {
            cd u = std::polar(std::exp(lm), -phi);
            return (cd{0.0, 1.0} * u / (1.0 - u)).real();
        }
        return (-cd{0.0, 1.0} / (1.0 - vinv)).real();
    };
    const double a = 0.75 * kPi, b = 1.25 * kPi;
    const double delta = kPi / (2.0 * (static_cast<double>(m) - 1.0));
    double quad_err = 0.0;
    double coarse = (b - a) / 6.0 * (g(a) + 4.0 * g(0.5 * (a + b)) + g(b));
    double eps = std::max(1e-13, 1e-12 * (1.0 + std::abs(coarse)));
    double err_c = 0.0;
    cd I = adsimp([&](double t) { return cd{g(t), 0.0}; }, a, b, eps, err_c);
    quad_err += err_c;
    double sum = I.real() / delta + 0.5 * (g(a) + g(b)) + (delta / 12.0) * (gp(b) - gp(a));
    // error estimate: third-derivative correction by finite differences
    double step = 1e-3;
    double g3a = (gp(a + 2 * step) - 2 * gp(a + step) + gp(a)) / (step * step);
    double g3b = (gp(b) - 2 * gp(b - step) + gp(b - 2 * step)) / (step * step);
    double err = quad_err / delta + std::abs(delta * delta * delta * (g3b - g3a) / 720.0) +
                 std::abs(g(a)) * 1e-12;
    return {{sum, 0.0}, err};
}

LogComplex derivative_at_zero(const CanonicalProduct& f, std::size_t k) {
    LogComplex zk = f.zeros->point_lc(k);
    ProductEval cof = dispatch_eval(f, zk, k, true);
    double Hp = harmonic(f.genus);
    return {Hp + cof.value.log_mag - zk.log_mag, wrap_phase(kPi - zk.phase + cof.value.phase)};
}

double log_cofactor_magnitude(const CanonicalProduct& f, std::size_t k) {
    LogComplex zk = f.zeros->point_lc(k);
    ProductEval cof = dispatch_eval(f, zk, k, false);
    return cof.value.log_mag;
}

MaxModulus max_modulus_on_circle(const CanonicalProduct& f, double log_r, int n_theta) {
    if (n_theta < 8 || (n_theta & (n_theta - 1)) != 0)
        throw std::domain_error("max_modulus_on_circle: n_theta must be a power of two >= 8");
    const std::size_t n = static_cast<std::size_t>(n_theta);
    std::vector<double> vals(n);
    std::vector<char> failed(n, 0);
    auto theta_at = [&](double i) { return -kPi + 2.0 * kPi * (i + 0.5) / static_cast<double>(n); };
    kernels::parallel_for(n, [&](std::size_t i) {
        try {
            vals[i] = eval_magnitude(f, lc_from_polar(log_r, theta_at(static_cast<double>(i)))).value.log_mag;
        } catch (const SingularityError&) {
            vals[i] = kNegInf;
        } catch (const NumericError&) {
            vals[i] = kNegInf;
            failed[i] = 1;
        }
    });
    std::size_t best = 0;
    for (std::size_t i = 1; i < n; ++i)
        if (vals[i] > vals[best]) best = i;
    if (failed[best])
        throw QuadratureError("max_modulus_on_circle", "evaluation failed at the grid argmax");
    auto g = [&](double t) {
        try {
            return eval_magnitude(f, lc_from_polar(log_r, wrap_phase(t))).value.log_mag;
        } catch (const NumericError&) {
            return kNegInf;
        }
    };
    // golden-section refinement around the argmax cell
    double lo = theta_at(static_cast<double>(best) - 1.0);
    double hi = theta_at(static_cast<double>(best) + 1.0);
    const double invphi = 0.6180339887498949;
    double x1 = hi - invphi * (hi - lo), x2 = lo + invphi * (hi - lo);
    double f1 = g(x1), f2 = g(x2);
    for (int it = 0; it < 48 && hi - lo > 1e-9; ++it) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + invphi * (hi - lo);
            f2 = g(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - invphi * (hi - lo);
            f1 = g(x1);
        }
    }
    double tm = 0.5 * (lo + hi);
    double fm = g(tm);
    if (vals[best] > fm) {
        tm = theta_at(static_cast<double>(best));
        fm = vals[best];
    }
    return {wrap_phase(tm), fm};
}

}  // namespace nevlab
