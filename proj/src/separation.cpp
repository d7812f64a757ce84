#include "nevlab/separation.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <stdexcept>

#include "nevlab/kernels.hpp"

namespace nevlab {

namespace {

constexpr double kFarLog = 40.0;  // |log(b_i/b_m)| beyond which cross-circle
                                  // factors are constants to < 1e-16

double harmonic(int p) {
    double h = 0.0;
    for (int j = 1; j <= p; ++j) h += 1.0 / j;
    return h;
}

double weight_of(double L, WeightKind kind, double q, double rho) {
    switch (kind) {
        case WeightKind::power:
            return std::exp(q * L);
        case WeightKind::log_power: {
            double u = L > 30.0 ? L + std::log1p(std::exp(-L)) : std::log1p(std::exp(L));
            return std::pow(u, q);
        }
        case WeightKind::lindelof_refined:
            return std::exp(rho * L) * rho * L;  // x^rho log(x^rho)
    }
    return 0.0;
}

double log_abs_one_minus_polar(double lm, double ph) {
    return log_abs_one_minus(LogComplex{lm, ph});
}

// base entries for the Anderson-Clunie sequence: cross-circle contributions
// collapse to constants once the radius ratio exceeds e^kFarLog, and the
// same-circle cofactors reduce to prefix sums over the index difference.
void ac_basis(const ACZeros& ac, std::size_t K, std::vector<double>& base,
              std::vector<char>& excluded) {
    std::size_t done = 0;
    for (std::size_t i = 0; i < ac.n_circles() && done < K; ++i) {
        if (!ac.circle_materialized(i))
            throw NumericError("separation_scan", "scan depth reaches an unmaterialized circle");
        auto angles = ac.circle_angles(i);
        const std::size_t c = angles.size();
        const std::size_t take = std::min(c, K - done);

        double const_part = 0.0;
        std::vector<std::size_t> near;
        for (std::size_t m = 0; m < ac.n_circles(); ++m) {
            if (m == i) continue;
            double lm = ac.circle_log_b(i) - ac.circle_log_b(m);
            if (std::abs(lm) >= kFarLog) {
                const_part += ac.circle_count(m) * std::max(lm, 0.0);
            } else if (ac.circle_materialized(m) &&
                       static_cast<double>(c) * ac.circle_count(m) <= 1e8) {
                near.push_back(m);
            } else {
                throw NumericError("separation_scan",
                                   "adjacent circles too large to pair explicitly");
            }
        }

        // same-circle prefix sums of log(2 sin(d*delta/2))
        std::vector<double> S(c, 0.0);
        if (c >= 2) {
            double delta = kPi / (2.0 * (static_cast<double>(c) - 1.0));
            for (std::size_t d = 1; d < c; ++d)
                S[d] = S[d - 1] + std::log(2.0 * std::sin(0.5 * d * delta));
        }

        for (std::size_t j = 0; j < take; ++j) {
            double v = const_part + S[j] + S[c - 1 - j];
            for (std::size_t m : near) {
                double lm = ac.circle_log_b(i) - ac.circle_log_b(m);
                for (double phi : ac.circle_angles(m))
                    v += log_abs_one_minus_polar(lm, wrap_phase(angles[j] - phi));
            }
            base[done + j] = v;
            excluded[done + j] = 0;
        }
        done += take;
    }
    if (done < K) throw std::domain_error("separation_scan: K exceeds enumerable zeros");
}

struct TrendFit {
    double slope = 0.0;
    double se = 0.0;
    std::size_t used = 0;
};

TrendFit fit_deepest_half(const std::vector<double>& per_k, const std::vector<char>& excluded) {
    std::size_t K = per_k.size();
    std::vector<double> x, y;
    for (std::size_t k = K / 2; k < K; ++k) {
        if (excluded[k] || !std::isfinite(per_k[k])) continue;
        x.push_back(static_cast<double>(k + 1));
        y.push_back(per_k[k]);
    }
    TrendFit fit;
    fit.used = x.size();
    if (fit.used < 3) return fit;
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= x.size();
    my /= x.size();
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    fit.slope = sxy / sxx;
    double ssr = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double r = y[i] - my - fit.slope * (x[i] - mx);
        ssr += r * r;
    }
    fit.se = x.size() > 2 ? std::sqrt(ssr / static_cast<double>(x.size() - 2) / sxx) : 0.0;
    return fit;
}

double seq_rho(const ZeroSequence& seq) {
    return seq.kind() == SeqKind::lindelof ? seq.convergence_exponent() : 0.0;
}

}  // namespace

const char* to_string(SeparationReport::Verdict v) {
    switch (v) {
        case SeparationReport::Verdict::bounded_below: return "bounded-below";
        case SeparationReport::Verdict::decaying: return "decaying";
        case SeparationReport::Verdict::inconclusive: return "inconclusive";
    }
    return "?";
}

SeparationBasis separation_basis(const SeqPtr& seq, WeightKind weight, double q, std::size_t K) {
    if (K < 1) throw std::domain_error("separation_basis: K must be >= 1");
    if (weight == WeightKind::lindelof_refined && seq->kind() != SeqKind::lindelof)
        throw std::domain_error("separation_basis: refined weight applies to the Lindelof kind");
    if (!(q >= 0.0)) throw std::domain_error("separation_basis: q must be >= 0");

    SeparationBasis b;
    b.base.assign(K, std::numeric_limits<double>::quiet_NaN());
    b.w.assign(K, 0.0);
    b.excluded.assign(K, 1);

    double rho = seq_rho(*seq);
    for (std::size_t k = 0; k < K; ++k) b.w[k] = weight_of(seq->log_modulus(k), weight, q, rho);

    if (const ACZeros* ac = as_ac(*seq)) {
        ac_basis(*ac, K, b.base, b.excluded);
        return b;
    }

    CanonicalProduct f = make_product(seq);
    double hp = harmonic(f.genus);
    std::exception_ptr fatal = nullptr;
    kernels::parallel_for(K, [&](std::size_t k) {
        try {
            b.base[k] = hp + log_cofactor_magnitude(f, k);
            b.excluded[k] = 0;
        } catch (const TruncationError&) {
            b.excluded[k] = 1;  // flagged, excluded from the verdict
        } catch (...) {
#pragma omp critical
            if (!fatal) fatal = std::current_exception();
        }
    });
    if (fatal) std::rethrow_exception(fatal);
    return b;
}

SeparationReport scan_with_constant(const SeparationBasis& basis, WeightKind weight, double q,
                                    double C) {
    if (!(C > 0.0)) throw std::domain_error("separation_scan: C must be positive");
    SeparationReport r;
    r.weight_kind = weight;
    r.q = q;
    r.C = C;
    r.K = basis.base.size();
    r.per_k.resize(r.K);
    r.excluded = basis.excluded;
    r.inf_log = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < r.K; ++k) {
        r.per_k[k] = basis.base[k] + C * basis.w[k];
        if (!basis.excluded[k]) r.inf_log = std::min(r.inf_log, r.per_k[k]);
    }
    TrendFit fit = fit_deepest_half(r.per_k, r.excluded);
    r.trend_slope = fit.slope;
    r.trend_stderr = fit.se;
    if (fit.used < 3) {
        r.verdict = SeparationReport::Verdict::inconclusive;
    } else if (fit.slope < 0.0 && std::abs(fit.slope) > 2.0 * fit.se) {
        r.verdict = SeparationReport::Verdict::decaying;
    } else {
        r.verdict = SeparationReport::Verdict::bounded_below;
    }
    return r;
}

SeparationReport separation_scan(const SeqPtr& seq, WeightKind weight, double q, double C,
                                 std::size_t K) {
    if (K < 10) throw std::domain_error("separation_scan: K must be >= 10");
    SeparationBasis basis = separation_basis(seq, weight, q, K);
    return scan_with_constant(basis, weight, q, C);
}

std::optional<double> witness_constant_search(const SeqPtr& seq, WeightKind weight, double q,
                                              std::size_t K, double threshold,
                                              std::size_t min_k) {
    SeparationBasis basis = separation_basis(seq, weight, q, K);
    for (int j = -10; j <= 40; ++j) {
        double C = std::ldexp(1.0, j);
        double inf = std::numeric_limits<double>::infinity();
        for (std::size_t k = (min_k >= 1 ? min_k - 1 : 0); k < basis.base.size(); ++k) {
            if (basis.excluded[k]) continue;
            inf = std::min(inf, basis.base[k] + C * basis.w[k]);
        }
        if (inf >= threshold) return C;
    }
    return std::nullopt;
}

ACDecomposition ac_separation_decomposition(const SeqPtr& seq, std::size_t circle_i,
                                            std::size_t j_on_circle) {
    const ACZeros* ac = as_ac(*seq);
    if (!ac) throw std::domain_error("ac_separation_decomposition: not an Anderson-Clunie sequence");
    if (circle_i < 1 || circle_i > ac->n_circles())
        throw std::domain_error("ac_separation_decomposition: circle index out of range");
    std::size_t i = circle_i - 1;
    if (!ac->circle_materialized(i))
        throw std::domain_error("ac_separation_decomposition: circle not materialized");
    auto angles = ac->circle_angles(i);
    if (j_on_circle >= angles.size())
        throw std::domain_error("ac_separation_decomposition: zero index out of range");
    double phi = angles[j_on_circle];

    ACDecomposition d;
    for (std::size_t m = 0; m < ac->n_circles(); ++m) {
        if (m == i) continue;
        if (!ac->circle_materialized(m))
            throw std::domain_error("ac_separation_decomposition: circle not materialized");
        double lm = ac->circle_log_b(i) - ac->circle_log_b(m);
        double s = 0.0;
        for (double phim : ac->circle_angles(m))
            s += log_abs_one_minus_polar(lm, wrap_phase(phi - phim));
        (m < i ? d.log_p1 : d.log_p2) += s;
    }
    for (std::size_t t = 0; t < angles.size(); ++t) {
        if (t == j_on_circle) continue;
        d.log_p3 += log_abs_one_minus_polar(0.0, wrap_phase(phi - angles[t]));
    }
    return d;
}

}  // namespace nevlab
