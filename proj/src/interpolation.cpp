#include "nevlab/interpolation.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <stdexcept>

#include "nevlab/kernels.hpp"
#include "nevlab/zeta.hpp"

namespace nevlab {

namespace {

using cd = std::complex<double>;

constexpr double kLn2 = 0.6931471805599453094172321214581766;
constexpr double kLn4 = 1.3862943611198906188344642429163531;

struct ScaledCoeffs {
    std::vector<cd> c;  // c_m * e^{-Lmax}
    double lmax = kNegInf;
};

ScaledCoeffs circle_coeffs(const std::vector<LogComplex>& vals, int max_order) {
    ScaledCoeffs out;
    for (const auto& v : vals) out.lmax = std::max(out.lmax, v.log_mag);
    const std::size_t n = vals.size();
    out.c.resize(static_cast<std::size_t>(max_order) + 1);
    if (out.lmax == kNegInf) return out;  // identically zero on the circle
    std::vector<kernels::Sum2> terms(n);
    for (int m = 0; m <= max_order; ++m) {
        for (std::size_t j = 0; j < n; ++j) {
            double mag = std::exp(vals[j].log_mag - out.lmax);
            double ang = vals[j].phase - m * (2.0 * kPi * static_cast<double>(j) / n);
            terms[j] = {mag * std::cos(ang), mag * std::sin(ang)};
        }
        kernels::Sum2 s = kernels::pairwise_sum2(terms);
        out.c[static_cast<std::size_t>(m)] = cd{s.a, s.b} / static_cast<double>(n);
    }
    return out;
}

}  // namespace

std::vector<LogComplex> cauchy_derivatives(const Evaluator& f, const LogComplex& center,
                                           double log_radius, int max_order,
                                           const CauchySettings& cs) {
    double lh = log_radius;
    for (int shrink = 0; shrink < 200; ++shrink, lh -= kLn2) {
        int n = cs.start_nodes;
        std::vector<LogComplex> vals(static_cast<std::size_t>(n));
        bool bad = false;
        double lo = std::numeric_limits<double>::infinity(), hi = kNegInf;
        for (int j = 0; j < n && !bad; ++j) {
            try {
                vals[static_cast<std::size_t>(j)] =
                    f(lc_add(center, lc_from_polar(lh, 2.0 * kPi * j / n)));
            } catch (const SingularityError&) {
                bad = true;
            }
            if (!bad) {
                double v = vals[static_cast<std::size_t>(j)].log_mag;
                if (v != kNegInf) {
                    lo = std::min(lo, v);
                    hi = std::max(hi, v);
                }
            }
        }
        if (bad || (hi != kNegInf && hi - lo > cs.range_guard)) continue;  // halve the radius

        ScaledCoeffs prev = circle_coeffs(vals, max_order);
        while (n < cs.max_nodes) {
            n *= 2;
            std::vector<LogComplex> nv(static_cast<std::size_t>(n));
            bool bad2 = false;
            for (int j = 0; j < n; ++j) {
                if (j % 2 == 0) {
                    nv[static_cast<std::size_t>(j)] = vals[static_cast<std::size_t>(j / 2)];
                    continue;
                }
                try {
                    nv[static_cast<std::size_t>(j)] =
                        f(lc_add(center, lc_from_polar(lh, 2.0 * kPi * j / n)));
                } catch (const SingularityError&) {
                    bad2 = true;
                    break;
                }
            }
            if (bad2) break;  // shrink instead
            vals = std::move(nv);
            ScaledCoeffs cur = circle_coeffs(vals, max_order);
            bool stable = true;
            double rebase = std::exp(prev.lmax - cur.lmax);
            for (int m = 0; m <= max_order && stable; ++m) {
                cd a = cur.c[static_cast<std::size_t>(m)];
                cd b = prev.c[static_cast<std::size_t>(m)] * rebase;
                double scale = std::abs(a);
                if (scale <= 1e-12) continue;  // below the quadrature noise floor
                if (std::abs(a - b) > cs.tol * scale) stable = false;
            }
            if (stable) {
                std::vector<LogComplex> out(static_cast<std::size_t>(max_order) + 1);
                for (int m = 0; m <= max_order; ++m) {
                    cd a = cur.c[static_cast<std::size_t>(m)];
                    if (std::abs(a) == 0.0 || std::abs(a) <= 1e-13) {
                        out[static_cast<std::size_t>(m)] = lc_zero();
                        continue;
                    }
                    out[static_cast<std::size_t>(m)] = {
                        std::log(std::abs(a)) + cur.lmax - m * lh + std::lgamma(m + 1.0),
                        wrap_phase(std::arg(a))};
                }
                return out;
            }
            prev = cur;
        }
        // not stable at this radius; try a smaller one
    }
    throw QuadratureError("cauchy_derivatives", "no stable coefficients at any usable radius");
}

namespace {

LogComplex sigma_lindelof(const CanonicalProduct& f, std::size_t k) {
    const double rho = f.zeros->convergence_exponent();
    const double alpha = 1.0 / rho;
    const int p = f.genus;
    const double k1 = static_cast<double>(k + 1);
    const double a = std::pow(k1, alpha);
    const double la = alpha * std::log(k1);
    auto N = static_cast<std::size_t>(std::ceil(std::exp(rho * (la + kLn2))));
    N = std::max<std::size_t>(N, k + 2);
    if (N > 50'000'000)
        throw TruncationError("target_sigma", lc_zero(), std::numeric_limits<double>::infinity());
    double S = kernels::block_sum(N, [&](std::size_t i) {
        if (i == k) return 0.0;
        double n = static_cast<double>(i + 1);
        double bn = std::pow(n, alpha);
        return std::pow(a / bn, p) / (a - bn);
    });
    // tail = -sum_{m>=0} a^{p+m} zeta(alpha(p+m+1), N+1)
    double tail = 0.0;
    const double lq = la - alpha * std::log(static_cast<double>(N + 1));
    const double q = std::exp(lq);
    for (int m = 0; m < 600; ++m) {
        double lt = (p + m) * la + log_hurwitz_zeta(alpha * (p + m + 1), static_cast<double>(N + 1));
        double mag = std::exp(lt);
        tail -= mag;
        if (mag < 1e-14 * (std::abs(S) + 1.0)) break;
    }
    (void)q;
    return lc_from_real(2.0 * p / a + 2.0 * (S + tail));
}

LogComplex sigma_generic(const CanonicalProduct& f, std::size_t k) {
    const ZeroSequence& seq = *f.zeros;
    const int p = f.genus;
    LogComplex zk = seq.point_lc(k);
    std::size_t partner = std::numeric_limits<std::size_t>::max();
    LogComplex partner_term = lc_zero();
    if (auto pr = seq.pair(k)) {
        partner = pr->partner;
        LogComplex zn = seq.point_lc(partner);
        // (z_k/z_n)^p / (z_n - z_k): the difference is only representable in logs
        double lm = p * (zk.log_mag - zn.log_mag) - pr->log_gap;
        double ph = p * wrap_phase(zk.phase - zn.phase) + (partner > k ? 0.0 : kPi);
        partner_term = lc_from_polar(lm, ph);
    }
    LogComplex acc = lc_zero();
    const double ltol = std::log(f.trunc_tol);
    std::int64_t terms = 0;
    bool certified = false;
    for (std::size_t n = 0; n < seq.enum_cap(); ++n) {
        if (n == k) continue;
        LogComplex zn = seq.point_lc(n);
        if (zn.log_mag >= zk.log_mag + kLn2) {
            double lt = kLn2 + p * zk.log_mag + seq.recip_power_tail_log(n, p + 1.0);
            if (lt <= std::max(ltol, acc.log_mag - 34.0)) {
                certified = true;
                break;
            }
        }
        LogComplex term = n == partner
                              ? partner_term
                              : lc_div(lc_pow_int(lc_div(zk, zn), p), lc_sub(zn, zk));
        acc = lc_add(acc, term);
        if (++terms >= f.max_terms)
            throw TruncationError("target_sigma", acc, std::numeric_limits<double>::infinity());
    }
    if (!certified && !seq.is_finite())
        throw TruncationError("target_sigma", acc, std::numeric_limits<double>::infinity());
    LogComplex lead = lc_div(lc_from_real(-2.0 * p), zk);
    return lc_add(lead, lc_mul(lc_from_real(2.0), acc));
}

}  // namespace

LogComplex target_sigma(const CanonicalProduct& f, std::size_t k) {
    if (f.zeros->kind() == SeqKind::lindelof) return sigma_lindelof(f, k);
    return sigma_generic(f, k);
}

std::vector<long> ml_exponents(const std::vector<LogComplex>& residues,
                               const std::vector<double>& log_moduli, double alpha,
                               ExponentVariant variant, int genus) {
    if (!(alpha > 1.0)) throw std::domain_error("ml_exponents: alpha must exceed 1");
    if (residues.size() != log_moduli.size())
        throw std::invalid_argument("ml_exponents: size mismatch");
    std::vector<long> q(residues.size(), 0);
    const double off = variant == ExponentVariant::finite_order ? static_cast<double>(genus) : 0.0;
    for (std::size_t i = 0; i < residues.size(); ++i) {
        double L = log_moduli[i];
        if (!(L > 1.0)) continue;  // |z_n| <= e: q_n = 0
        double lc = residues[i].log_mag;
        if (lc == kNegInf) continue;
        double a1 = alpha * (lc / L + off);
        double a2 = (lc - std::log(static_cast<double>(i + 1))) / L + off + 1.0;
        double m = std::max(a1, a2);
        if (m > 0.0) q[i] = static_cast<long>(std::ceil(m));
    }
    return q;
}

namespace {

Evaluator product_evaluator(const CanonicalProduct& f) {
    return [f](const LogComplex& z) { return eval_product(f, z).value; };
}

std::size_t materialized_zero_index(const InterpolationArtifacts& art, const LogComplex& z) {
    for (std::size_t k = 0; k < art.K; ++k)
        if (art.zeros[k].log_mag == z.log_mag && art.zeros[k].phase == z.phase) return k;
    return std::numeric_limits<std::size_t>::max();
}

}  // namespace

LogComplex eval_H(const InterpolationArtifacts& art, const LogComplex& z) {
    LogComplex acc = lc_zero();
    for (std::size_t n = 0; n < art.K; ++n) {
        if (art.dropped[n]) continue;
        if (art.zeros[n].log_mag == z.log_mag && art.zeros[n].phase == z.phase)
            throw SingularityError("eval_H", "query at a pole; residues are available directly");
        LogComplex term = lc_mul(lc_div(art.residue[n], lc_sub(z, art.zeros[n])),
                                 lc_pow_int(lc_div(z, art.zeros[n]), art.exponent[n]));
        acc = lc_add(acc, term);
    }
    return acc;
}

LogComplex A_at_zero(const InterpolationArtifacts& art, std::size_t k) {
    if (art.dropped[k]) return lc_zero();
    return art.sigma[k];  // P'(z_k) c_k with the derivative cancelling exactly
}

LogComplex eval_A(const InterpolationArtifacts& art, const LogComplex& z) {
    std::size_t k = materialized_zero_index(art, z);
    if (k != std::numeric_limits<std::size_t>::max()) return A_at_zero(art, k);
    LogComplex fz = eval_product(art.product, z).value;
    if (lc_is_zero(fz)) return lc_zero();  // unmaterialized zero of f
    return lc_mul(fz, eval_H(art, z));
}

double nearest_zero_log_dist(const SeqPtr& seq, const LogComplex& z) {
    double lr = z.log_mag;
    double best = std::log(0.75) + lr;  // any zero outside a factor-4 window is this far
    double lo_d = seq->count_below(lr - kLn4);
    double hi_d = seq->count_below(lr + kLn4);
    auto lo = static_cast<std::size_t>(std::max(0.0, lo_d));
    auto hi = static_cast<std::size_t>(std::min(static_cast<double>(seq->enum_cap()), hi_d + 1.0));
    if (hi > lo + 200000)
        throw NumericError("nearest_zero_log_dist", "too many zeros near this modulus");
    for (std::size_t k = lo; k < hi; ++k)
        best = std::min(best, lc_sub(z, seq->point_lc(k)).log_mag);
    return best;
}

LogComplex eval_B(const InterpolationArtifacts& art, const LogComplex& z,
                  const CauchySettings& cs) {
    LogComplex fz = eval_product(art.product, z).value;
    if (lc_is_zero(fz))
        throw SingularityError("eval_B", "z lies on a zero of f; use B_at_zero");
    double lrad = nearest_zero_log_dist(art.product.zeros, z) + std::log(0.45);
    Evaluator fe = product_evaluator(art.product);
    std::vector<LogComplex> fd = cauchy_derivatives(fe, z, lrad, 2, cs);
    LogComplex num = lc_add(fd[2], lc_mul(eval_A(art, z), fd[1]));
    return lc_neg(lc_div(num, fz));
}

LogComplex B_at_zero(const InterpolationArtifacts& art, std::size_t k, const CauchySettings& cs) {
    double lrad = art.gap_log[k] + std::log(0.45);
    Evaluator fe = product_evaluator(art.product);
    std::vector<LogComplex> fd = cauchy_derivatives(fe, art.zeros[k], lrad, 3, cs);
    if (lc_is_zero(fd[1]))
        throw NumericError("eval_B", "vanishing f' at a zero; zeros must be simple");
    Evaluator ae = [&art](const LogComplex& z) { return eval_A(art, z); };
    std::vector<LogComplex> ad = cauchy_derivatives(ae, art.zeros[k], lrad, 1, cs);
    LogComplex num = lc_add(fd[3], lc_add(lc_mul(A_at_zero(art, k), fd[2]),
                                          lc_mul(ad[1], fd[1])));
    LogComplex B = lc_neg(lc_div(num, fd[1]));
    if (!std::isfinite(B.log_mag) && !lc_is_zero(B))
        throw NumericError("eval_B", "non-finite removable-singularity value");
    return B;
}

InterpolationArtifacts build_from_targets(const CanonicalProduct& f,
                                          std::vector<LogComplex> sigma, double alpha,
                                          ExponentVariant variant, std::optional<double> witness_C,
                                          double witness_q) {
    if (!(alpha > 1.0)) throw std::domain_error("build_coefficients: alpha must exceed 1");
    if (sigma.empty()) throw std::domain_error("build_coefficients: K must be >= 1");

    InterpolationArtifacts art;
    art.product = f;
    art.K = sigma.size();
    art.alpha = alpha;
    art.variant = variant;
    art.sigma = std::move(sigma);
    art.zeros.resize(art.K);
    art.gap_log.resize(art.K);
    art.deriv.resize(art.K);
    art.residue.resize(art.K);
    art.dropped.assign(art.K, 0);

    const ZeroSequence& seq = *f.zeros;
    for (std::size_t k = 0; k < art.K; ++k) {
        art.zeros[k] = seq.point_lc(k);
        double g = std::numeric_limits<double>::infinity();
        if (k > 0) g = std::min(g, lc_sub(art.zeros[k], seq.point_lc(k - 1)).log_mag);
        if (k + 1 < seq.enum_cap()) g = std::min(g, lc_sub(art.zeros[k], seq.point_lc(k + 1)).log_mag);
        art.gap_log[k] = g;
    }

    std::exception_ptr fatal = nullptr;
    kernels::parallel_for(art.K, [&](std::size_t k) {
        try {
            art.deriv[k] = derivative_at_zero(f, k);
        } catch (...) {
#pragma omp critical
            if (!fatal) fatal = std::current_exception();
        }
    });
    if (fatal) std::rethrow_exception(fatal);

    std::vector<LogComplex> res_nd;
    std::vector<double> lm_nd;
    std::vector<std::size_t> idx_nd;
    for (std::size_t k = 0; k < art.K; ++k) {
        if (lc_is_zero(art.sigma[k])) {
            art.dropped[k] = 1;
            art.residue[k] = lc_zero();
            continue;
        }
        art.residue[k] = lc_div(art.sigma[k], art.deriv[k]);
        res_nd.push_back(art.residue[k]);
        lm_nd.push_back(art.zeros[k].log_mag);
        idx_nd.push_back(k);
    }
    art.exponent.assign(art.K, 0);
    std::vector<long> q_nd = ml_exponents(res_nd, lm_nd, alpha, variant, f.genus);
    for (std::size_t i = 0; i < idx_nd.size(); ++i) art.exponent[idx_nd[i]] = q_nd[i];

    // interpolation residuals, re-evaluated at tightened truncation
    CanonicalProduct tight = f;
    tight.trunc_tol = f.trunc_tol / 16.0;
    art.interp_residual.assign(art.K, 0.0);
    art.numerator_residual.assign(art.K, std::numeric_limits<double>::quiet_NaN());
    Evaluator fe = product_evaluator(f);
    kernels::parallel_for(art.K, [&](std::size_t k) {
        try {
            if (!art.dropped[k]) {
                LogComplex a_tight = lc_mul(art.residue[k], derivative_at_zero(tight, k));
                LogComplex d = lc_sub(a_tight, art.sigma[k]);
                art.interp_residual[k] =
                    lc_is_zero(d) ? 0.0 : std::exp(d.log_mag - art.sigma[k].log_mag);
                std::vector<LogComplex> fd =
                    cauchy_derivatives(fe, art.zeros[k], art.gap_log[k] + std::log(0.45), 2);
                LogComplex num = lc_add(fd[2], lc_mul(art.sigma[k], fd[1]));
                art.numerator_residual[k] =
                    lc_is_zero(num) ? 0.0 : std::exp(num.log_mag - fd[2].log_mag);
            }
        } catch (...) {
#pragma omp critical
            if (!fatal) fatal = std::current_exception();
        }
    });
    if (fatal) std::rethrow_exception(fatal);

    // probe point: A(zeta) must differ from -f''(zeta)/f'(zeta)
    {
        LogComplex zeta = lc_from_polar(art.zeros[art.K - 1].log_mag + 1.0, 0.5);
        LogComplex az = eval_A(art, zeta);
        double lrad = nearest_zero_log_dist(f.zeros, zeta) + std::log(0.45);
        std::vector<LogComplex> fd = cauchy_derivatives(fe, zeta, lrad, 2);
        LogComplex tgt = lc_neg(lc_div(fd[2], fd[1]));
        LogComplex d = lc_sub(az, tgt);
        double scale = std::max(az.log_mag, tgt.log_mag);
        art.probe_margin = lc_is_zero(d) ? 0.0 : std::exp(d.log_mag - scale);
        art.nontrivial_A = art.probe_margin > 1e-12;
    }
    // B nontriviality at five probe points
    {
        art.nontrivial_B = false;
        for (int j = 0; j < 5 && !art.nontrivial_B; ++j) {
            LogComplex zeta =
                lc_from_polar(art.zeros[art.K - 1].log_mag + 0.4 + 0.2 * j, 0.3 + 0.5 * j);
            try {
                LogComplex b = eval_B(art, zeta);
                if (!lc_is_zero(b) && b.log_mag > std::log(1e-12)) art.nontrivial_B = true;
            } catch (const NumericError&) {
            }
        }
    }
    // majorant bookkeeping (diagnostic only): h is the running envelope of
    // max(1, |sigma_k|), I or F its weighted growth quotient
    {
        double hmax = 1.0;
        double best = 0.0;
        double C = witness_C.value_or(0.0);
        for (std::size_t k = 0; k < art.K; ++k) {
            double L = art.zeros[k].log_mag;
            hmax = std::max(hmax, std::exp(std::min(700.0, art.sigma[k].log_mag)));
            if (L <= 1.0) continue;
            double wq = art.variant == ExponentVariant::finite_order
                            ? std::exp(std::min(700.0, witness_q * L))
                            : std::pow(std::log1p(std::exp(std::min(700.0, L))), witness_q);
            double g = (std::log(hmax) + C * wq) / L;
            best = std::max(best, g);
        }
        art.majorant_value = best;
        double r = art.zeros[art.K - 1].log_mag;
        double lambda = seq.convergence_exponent();
        if (art.variant == ExponentVariant::finite_order) {
            double second = r > 0.0 ? std::log(std::max(best, 1e-12)) / r : 0.0;
            art.predicted_order_bound = std::max(std::isnan(lambda) ? 0.0 : lambda, second);
        } else {
            double llr = std::log(std::max(r, 1.001));
            double second = std::log(std::max(best, 1e-12)) / llr + 1.0;
            double lam_log = seq.log_convergence_exponent();
            art.predicted_order_bound =
                std::max(std::isnan(lam_log) ? 1.0 : lam_log + 1.0, second);
        }
    }
    return art;
}

InterpolationArtifacts build_coefficients(const CanonicalProduct& f, std::size_t K, double alpha,
                                          ExponentVariant variant, std::optional<double> witness_C,
                                          double witness_q) {
    std::vector<LogComplex> sigma(K);
    std::exception_ptr fatal = nullptr;
    kernels::parallel_for(K, [&](std::size_t k) {
        try {
            sigma[k] = target_sigma(f, k);
        } catch (const TruncationError&) {
#pragma omp critical
            if (!fatal)
                fatal = std::make_exception_ptr(NumericError(
                    "build_coefficients", "target sigma truncation at index " + std::to_string(k)));
        } catch (...) {
#pragma omp critical
            if (!fatal) fatal = std::current_exception();
        }
    });
    if (fatal) std::rethrow_exception(fatal);
    return build_from_targets(f, std::move(sigma), alpha, variant, witness_C, witness_q);
}

OdeResidualReport ode_residual(const std::vector<Evaluator>& coeffs, const Evaluator& f,
                               const std::vector<LogComplex>& points,
                               const std::vector<double>& log_radii, const CauchySettings& cs) {
    if (points.size() != log_radii.size())
        throw std::invalid_argument("ode_residual: points/radii size mismatch");
    const int n = static_cast<int>(coeffs.size());
    OdeResidualReport rep;
    rep.per_point.assign(points.size(), 0.0);
    rep.flagged.assign(points.size(), 0);
    std::exception_ptr fatal = nullptr;
    kernels::parallel_for(points.size(), [&](std::size_t i) {
        try {
            std::vector<LogComplex> fd = cauchy_derivatives(f, points[i], log_radii[i], n, cs);
            LogComplex acc = fd[static_cast<std::size_t>(n)];
            double max_log = acc.log_mag;
            for (int j = 0; j < n; ++j) {
                LogComplex t = lc_mul(coeffs[static_cast<std::size_t>(j)](points[i]),
                                      fd[static_cast<std::size_t>(j)]);
                max_log = std::max(max_log, t.log_mag);
                acc = lc_add(acc, t);
            }
            rep.per_point[i] = lc_is_zero(acc) ? 0.0 : std::exp(acc.log_mag - max_log);
        } catch (const QuadratureError&) {
            rep.flagged[i] = 1;
        } catch (...) {
#pragma omp critical
            if (!fatal) fatal = std::current_exception();
        }
    });
    if (fatal) std::rethrow_exception(fatal);
    for (std::size_t i = 0; i < points.size(); ++i)
        if (!rep.flagged[i]) rep.max_residual = std::max(rep.max_residual, rep.per_point[i]);
    return rep;
}

}  // namespace nevlab
