#include "nevlab/sequences.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

#include "nevlab/zeta.hpp"

namespace nevlab {

namespace {

constexpr double kLn2 = 0.6931471805599453094172321214581766;
constexpr std::size_t kMaterializeCap = 2'000'000;

// # of integers n >= 1 with n < X; real-valued beyond the exact-integer range.
double strict_count(double X) {
    if (!(X > 1.0)) return 0.0;
    if (X >= 9007199254740992.0) return X;
    double f = std::floor(X);
    return (f == X) ? f - 1.0 : f;
}

double log_sum_exp(std::vector<double>& t) {
    double hi = kNegInf;
    for (double x : t) hi = std::max(hi, x);
    if (hi == kNegInf) return kNegInf;
    double s = 0.0;
    for (double x : t) s += std::exp(x - hi);
    return hi + std::log(s);
}

using u128 = unsigned __int128;

bool ipow_checked(u128 base, long e, u128& out) {
    u128 r = 1;
    for (long i = 0; i < e; ++i) {
        if (__builtin_mul_overflow(r, base, &r)) return false;
    }
    out = r;
    return true;
}

u128 isqrt128(u128 x) {
    if (x == 0) return 0;
    u128 r = static_cast<u128>(std::sqrt(static_cast<double>(x)));
    if (r == 0) r = 1;
    while (r > x / r) --r;
    while ((r + 1) <= x / (r + 1)) ++r;
    return r;
}

bool is_positive_integer(double x) { return x > 0.0 && x == std::floor(x) && x < 1e18; }

}  // namespace

ACParameters ac_parameters(double rho, int n_max) {
    if (!(rho > 2.0)) throw std::domain_error("ac_parameters: rho must exceed 2");
    if (n_max < 2) throw std::domain_error("ac_parameters: n_max must be >= 2");
    ACParameters P;
    P.rho = rho;
    P.beta = 2.0 * (rho - 1.0) / (rho - 2.0);
    P.gamma = 2.0 / (rho - 2.0);

    const bool g_int = is_positive_integer(P.gamma);
    const bool e1_int = is_positive_integer(rho - 1.0);
    const bool e2_int = is_positive_integer(2.0 * (rho - 1.0));
    const long g_i = g_int ? static_cast<long>(P.gamma) : 0;
    const long e1_i = e1_int ? static_cast<long>(rho - 1.0) : 0;
    const long e2_i = e2_int ? static_cast<long>(2.0 * (rho - 1.0)) : 0;

    bool chain = true;  // the cumulative count is still held exactly
    u128 S_i = 0;
    double S_d = 0.0;

    for (int n = 1; n <= n_max; ++n) {
        double log_b;
        bool lb_exact = false;
        u128 lb_i = 0;
        MultEntry c;
        if (n == 1) {
            log_b = 0.0;
            lb_exact = true;
            lb_i = 0;
            c = {1.0, true, 1};
        } else {
            if (chain && g_int && ipow_checked(S_i, g_i, lb_i)) {
                lb_exact = true;
                log_b = static_cast<double>(lb_i);
            } else {
                log_b = std::pow(S_d, P.gamma);
            }
            if (lb_exact && e1_int) {
                u128 ci;
                if (ipow_checked(lb_i, e1_i, ci)) {
                    c = {static_cast<double>(ci), true, ci};
                } else {
                    c = {std::floor(std::pow(log_b, rho - 1.0)), false, 0};
                }
            } else if (lb_exact && e2_int) {
                // floor(b^{(2e)/2}) = isqrt(b^{2e}) when b^{2e} is exact
                u128 sq;
                if (ipow_checked(lb_i, e2_i, sq)) {
                    u128 ci = isqrt128(sq);
                    c = {static_cast<double>(ci), true, ci};
                } else {
                    c = {std::floor(std::pow(log_b, rho - 1.0)), false, 0};
                }
            } else {
                double t = std::pow(log_b, rho - 1.0);
                double fl = std::floor(t);
                // trust the floor only when the power is comfortably away from
                // an integer boundary relative to pow's rounding
                bool ok = lb_exact && t < 9e15 &&
                          std::min(t - fl, fl + 1.0 - t) > std::max(1e-12, 8e-16 * t);
                c = {fl, ok, ok ? static_cast<u128>(fl) : 0};
            }
        }
        P.log_b.push_back(log_b);
        P.mult.push_back(c);
        if (chain && c.exact) {
            u128 next = S_i + c.ivalue;
            if (next < S_i) chain = false;  // wrapped
            else S_i = next;
        } else {
            chain = false;
        }
        S_d += c.value;
        if (chain) S_d = static_cast<double>(S_i);
        P.cum_count.push_back(S_d);
    }
    return P;
}

double ac_angle(std::int64_t m, std::int64_t i) {
    if (m <= 0 || i < 1 || i > m) throw std::domain_error("ac_angle: need m >= 1, 1 <= i <= m");
    if (m == 1) return kPi;
    // phi_i = 3pi/4 + (i-1) * pi/(2(m-1)), jointly covering both parities.
    // Quad precision keeps every gap within one double ulp of pi/(2(m-1)).
    constexpr __float128 pi_q = 3.14159265358979323846264338327950288Q;
    __float128 step = pi_q / (2.0Q * static_cast<__float128>(m - 1));
    return static_cast<double>(0.75Q * pi_q + static_cast<__float128>(i - 1) * step);
}

std::vector<double> ac_angles(std::int64_t m) {
    if (m <= 0) throw std::domain_error("ac_angles: m must be >= 1");
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(m));
    for (std::int64_t i = 1; i <= m; ++i) out.push_back(ac_angle(m, i));
    return out;
}

double ZeroSequence::integrated_count(double log_r) const {
    double n = count_below(log_r);
    if (n <= 0.0) return 0.0;
    auto m = static_cast<std::size_t>(n);
    double sum = 0.0;
    for (std::size_t k = 0; k < m; ++k) sum += log_r - log_modulus(k);
    return sum;
}

// ---------------------------------------------------------------------------
// Lindelof: z_k = -k^{1/rho}

namespace {

class LindelofZeros final : public ZeroSequence {
public:
    explicit LindelofZeros(double rho)
        : ZeroSequence(SeqKind::lindelof, static_cast<int>(std::floor(rho)), rho,
                       std::numeric_limits<double>::infinity()),
          rho_(rho),
          alpha_(1.0 / rho) {}

    double rho() const { return rho_; }

    LogComplex point_lc(std::size_t k) const override {
        return {alpha_ * std::log(static_cast<double>(k + 1)), kPi};
    }
    double log_modulus(std::size_t k) const override {
        return alpha_ * std::log(static_cast<double>(k + 1));
    }
    double count_below(double log_r) const override {
        return strict_count(std::exp(rho_ * log_r));
    }
    double integrated_count(double log_r) const override {
        double m = count_below(log_r);
        if (m <= 0.0) return 0.0;
        return m * log_r - alpha_ * std::lgamma(m + 1.0);
    }
    double recip_power_tail_log(std::size_t first, double s) const override {
        double se = s * alpha_;
        if (se <= 1.0) return std::numeric_limits<double>::infinity();
        return log_hurwitz_zeta(se, static_cast<double>(first + 1));
    }

private:
    double rho_, alpha_;
};

// ---------------------------------------------------------------------------
// Bank: pairs (2^n, 2^n + eps_n); eps stored as a log only.

class BankZeros final : public ZeroSequence {
public:
    explicit BankZeros(double log_eps_cap)
        : ZeroSequence(SeqKind::bank, 0, 0.0, 1.0), log_eps_cap_(log_eps_cap) {
        if (!(log_eps_cap < 0.0))
            throw std::domain_error("bank_zeros: eps cap must lie in (0, 1)");
    }

    double log_eps(std::size_t n1) const {
        // eps_n = min(cap, exp(-exp(2^n))); -inf once exp(2^n) overflows
        double e = std::exp(std::exp2(static_cast<double>(n1)));
        return std::min(log_eps_cap_, -e);
    }

    double log_eps_cap_;

    LogComplex point_lc(std::size_t k) const override { return {log_modulus(k), 0.0}; }
    double log_modulus(std::size_t k) const override {
        std::size_t n1 = k / 2 + 1;
        double base = static_cast<double>(n1) * kLn2;
        if (k % 2 == 0) return base;
        return base + std::log1p(std::exp(log_eps(n1) - base));
    }
    std::optional<PairInfo> pair(std::size_t k) const override {
        std::size_t n1 = k / 2 + 1;
        return PairInfo{k % 2 == 0 ? k + 1 : k - 1, log_eps(n1)};
    }
    double count_below(double log_r) const override {
        return 2.0 * strict_count(log_r / kLn2);
    }
    double recip_power_tail_log(std::size_t first, double s) const override {
        double n0 = static_cast<double>(first / 2 + 1);
        return kLn2 - n0 * s * kLn2 - std::log1p(-std::exp(-s * kLn2));
    }
};

// ---------------------------------------------------------------------------
// Geometric: z_n = ratio^n e^{i phase}

class GeometricZeros final : public ZeroSequence {
public:
    GeometricZeros(double ratio, double phase)
        : ZeroSequence(SeqKind::geometric, 0, 0.0, 1.0), lr_(std::log(ratio)), phase_(wrap_phase(phase)) {
        if (!(ratio > 1.0)) throw std::domain_error("geometric_zeros: ratio must exceed 1");
    }

    LogComplex point_lc(std::size_t k) const override {
        return {static_cast<double>(k + 1) * lr_, phase_};
    }
    double count_below(double log_r) const override { return strict_count(log_r / lr_); }
    double recip_power_tail_log(std::size_t first, double s) const override {
        double n0 = static_cast<double>(first + 1);
        return -n0 * s * lr_ - std::log1p(-std::exp(-s * lr_));
    }

private:
    double lr_, phase_;
};

// ---------------------------------------------------------------------------
// Paired geometric: {2^n} U {2^n + gap_n}

class PairedGeometricZeros final : public ZeroSequence {
public:
    PairedGeometricZeros(double q, PairedRule rule)
        : ZeroSequence(SeqKind::paired_geometric, 0, 0.0, 1.0), q_(q), rule_(rule) {
        if (!(q > 0.0)) throw std::domain_error("paired_geometric_zeros: q must be positive");
    }

    double log_gap(std::size_t n1) const {
        double n = static_cast<double>(n1);
        double decay = rule_ == PairedRule::ex1 ? std::exp2(n * q_) : std::pow(n * kLn2, q_);
        return std::min(-kLn2, n * kLn2 - decay);
    }

    LogComplex point_lc(std::size_t k) const override { return {log_modulus(k), 0.0}; }
    double log_modulus(std::size_t k) const override {
        std::size_t n1 = k / 2 + 1;
        double base = static_cast<double>(n1) * kLn2;
        if (k % 2 == 0) return base;
        return base + std::log1p(std::exp(log_gap(n1) - base));
    }
    std::optional<PairInfo> pair(std::size_t k) const override {
        std::size_t n1 = k / 2 + 1;
        return PairInfo{k % 2 == 0 ? k + 1 : k - 1, log_gap(n1)};
    }
    double count_below(double log_r) const override { return 2.0 * strict_count(log_r / kLn2); }
    double recip_power_tail_log(std::size_t first, double s) const override {
        double n0 = static_cast<double>(first / 2 + 1);
        return kLn2 - n0 * s * kLn2 - std::log1p(-std::exp(-s * kLn2));
    }

private:
    double q_;
    PairedRule rule_;
};

// ---------------------------------------------------------------------------
// Explicit list

class ExplicitZeros final : public ZeroSequence {
public:
    explicit ExplicitZeros(std::vector<std::complex<double>> pts)
        : ZeroSequence(SeqKind::explicit_list, 0, std::numeric_limits<double>::quiet_NaN(),
                       std::numeric_limits<double>::quiet_NaN()) {
        for (const auto& z : pts)
            if (z == std::complex<double>(0.0, 0.0))
                throw std::invalid_argument("explicit_zeros: zero point not allowed");
        std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
            double ma = std::abs(a), mb = std::abs(b);
            if (ma != mb) return ma < mb;
            return std::arg(a) < std::arg(b);
        });
        for (std::size_t i = 1; i < pts.size(); ++i)
            if (pts[i] == pts[i - 1])
                throw std::invalid_argument("explicit_zeros: duplicate point");
        pts_ = std::move(pts);
        log_mod_.reserve(pts_.size());
        for (const auto& z : pts_) log_mod_.push_back(std::log(std::abs(z)));
        // heuristic: smallest p with sum |z|^{-(p+1)} below a fixed cap; a
        // finite list cannot determine the genus, so this is advisory only
        int p = 0;
        for (; p < 64; ++p) {
            double s = 0.0;
            for (double lm : log_mod_) s += std::exp(-(p + 1.0) * lm);
            if (s <= 1000.0) break;
        }
        genus_ = p;
    }

    std::vector<int> genus_candidates() const override {
        if (genus_ >= 1) return {genus_ - 1, genus_};
        return {0};
    }
    bool is_finite() const override { return true; }
    std::size_t enum_cap() const override { return pts_.size(); }
    LogComplex point_lc(std::size_t k) const override {
        if (k >= pts_.size()) throw std::out_of_range("explicit_zeros: index past end");
        return lc_from(pts_[k]);
    }
    double log_modulus(std::size_t k) const override {
        if (k >= pts_.size()) throw std::out_of_range("explicit_zeros: index past end");
        return log_mod_[k];
    }
    double count_below(double log_r) const override {
        return static_cast<double>(
            std::lower_bound(log_mod_.begin(), log_mod_.end(), log_r) - log_mod_.begin());
    }
    double recip_power_tail_log(std::size_t first, double s) const override {
        if (first >= pts_.size()) return kNegInf;
        std::vector<double> t;
        t.reserve(pts_.size() - first);
        for (std::size_t k = first; k < pts_.size(); ++k) t.push_back(-s * log_mod_[k]);
        return log_sum_exp(t);
    }

private:
    std::vector<std::complex<double>> pts_;
    std::vector<double> log_mod_;
};

}  // namespace

// ---------------------------------------------------------------------------
// Anderson-Clunie

ACZeros::ACZeros(double rho, int n_max)
    : ZeroSequence(SeqKind::anderson_clunie, 0, 0.0, rho - 1.0), params_(ac_parameters(rho, n_max)) {
    for (std::size_t i = 0; i < params_.mult.size(); ++i) {
        const MultEntry& c = params_.mult[i];
        bool integer_count = c.value == std::floor(c.value) && c.value >= 1.0;
        if (!integer_count || c.value > static_cast<double>(kMaterializeCap)) break;
        if (materialized_count_ + static_cast<std::size_t>(c.value) > 2 * kMaterializeCap) break;
        angles_.push_back(ac_angles(static_cast<std::int64_t>(c.value)));
        materialized_count_ += static_cast<std::size_t>(c.value);
    }
    double S = params_.cum_count.back();
    next_log_b_ = std::pow(S, params_.gamma);
    next_log_c_ = (rho - 1.0) * std::log(next_log_b_);
}

std::size_t ACZeros::circle_first_index(std::size_t i) const {
    std::size_t n = 0;
    for (std::size_t m = 0; m < i && m < angles_.size(); ++m) n += angles_[m].size();
    return n;
}

double ACZeros::beyond_tail_log(double s) const {
    // first unstored circle term, doubled twice for the geometric remainder
    return next_log_c_ - s * next_log_b_ + std::log(4.0);
}

LogComplex ACZeros::point_lc(std::size_t k) const {
    std::size_t i = 0, off = k;
    while (i < angles_.size() && off >= angles_[i].size()) {
        off -= angles_[i].size();
        ++i;
    }
    if (i >= angles_.size()) throw std::out_of_range("ACZeros: point index beyond materialized circles");
    return {params_.log_b[i], wrap_phase(angles_[i][off])};
}

double ACZeros::count_below(double log_r) const {
    double n = 0.0;
    for (std::size_t i = 0; i < params_.log_b.size(); ++i)
        if (params_.log_b[i] < log_r) n += params_.mult[i].value;
    return n;
}

double ACZeros::integrated_count(double log_r) const {
    double N = 0.0;
    for (std::size_t i = 0; i < params_.log_b.size(); ++i)
        if (params_.log_b[i] <= log_r) N += params_.mult[i].value * (log_r - params_.log_b[i]);
    return N;
}

double ACZeros::recip_power_tail_log(std::size_t first, double s) const {
    std::vector<double> terms;
    std::size_t i = 0, off = first;
    while (i < angles_.size() && off >= angles_[i].size()) {
        off -= angles_[i].size();
        ++i;
    }
    if (i < angles_.size() && off > 0) {
        double rem = static_cast<double>(angles_[i].size() - off);
        terms.push_back(std::log(rem) - s * params_.log_b[i]);
        ++i;
        off = 0;
    }
    for (; i < params_.log_b.size(); ++i)
        terms.push_back(std::log(params_.mult[i].value) - s * params_.log_b[i]);
    terms.push_back(beyond_tail_log(s));
    return log_sum_exp(terms);
}

const ACZeros* as_ac(const ZeroSequence& s) { return dynamic_cast<const ACZeros*>(&s); }

// ---------------------------------------------------------------------------
// Factories

SeqPtr lindelof_zeros(double rho) {
    if (!(rho > 0.5)) throw std::domain_error("lindelof_zeros: rho must exceed 1/2");
    return std::make_shared<LindelofZeros>(rho);
}

SeqPtr bank_zeros(double log_eps_cap) { return std::make_shared<BankZeros>(log_eps_cap); }

SeqPtr geometric_zeros(double ratio, double phase) {
    return std::make_shared<GeometricZeros>(ratio, phase);
}

SeqPtr paired_geometric_zeros(double q, PairedRule rule) {
    return std::make_shared<PairedGeometricZeros>(q, rule);
}

SeqPtr anderson_clunie_zeros(double rho, int n_max) {
    return std::make_shared<ACZeros>(rho, n_max);
}

SeqPtr explicit_zeros(std::vector<std::complex<double>> points) {
    return std::make_shared<ExplicitZeros>(std::move(points));
}

SeqPtr explicit_zeros_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("explicit_zeros_from_file: cannot open " + path);
    std::vector<std::complex<double>> pts;
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        double re, im;
        if (!(ls >> re >> im)) continue;
        double mult = 1.0;
        if (ls >> mult && mult != 1.0)
            throw std::invalid_argument("explicit_zeros_from_file: only simple zeros (multiplicity 1)");
        pts.emplace_back(re, im);
    }
    return explicit_zeros(std::move(pts));
}

// ---------------------------------------------------------------------------
// Power-mean inequality oracle

PowerInequalityResult check_power_inequalities(long samples, std::uint64_t seed) {
    if (samples < 1) throw std::domain_error("check_power_inequalities: samples >= 1");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<long> small(1, 999);
    std::uniform_int_distribution<long> gapd(1, 1000);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    PowerInequalityResult res;
    auto check = [&res](double lo, double mid, double hi) {
        double slack =
            4.0 * std::numeric_limits<double>::epsilon() *
            std::max({std::abs(lo), std::abs(mid), std::abs(hi)});
        ++res.checks;
        if (!(mid >= lo - slack && mid <= hi + slack)) ++res.violations;
    };

    for (long it = 0; it < samples; ++it) {
        // integer pair, both exponent regimes
        double n = static_cast<double>(small(rng));
        double k = n + static_cast<double>(gapd(rng));
        double alpha = it % 2 == 0 ? unit(rng) : 1.0 + 3.0 * unit(rng);
        if (alpha == 0.0) alpha = 0.5;
        double diff = std::pow(k, alpha) - std::pow(n, alpha);
        double ek = alpha * (k - n) * std::pow(k, alpha - 1.0);
        double en = alpha * (k - n) * std::pow(n, alpha - 1.0);
        if (alpha <= 1.0) check(ek, diff, en);
        if (alpha >= 1.0) check(en, diff, ek);

        // real pair 0 < A < B with gamma in both regimes
        double A = 0.01 + 10.0 * unit(rng);
        double B = A + 0.001 + 10.0 * unit(rng);
        double g = it % 2 == 0 ? unit(rng) : 1.0 + 3.0 * unit(rng);
        if (g == 0.0) g = 0.5;
        double diff2 = std::pow(B, g) - std::pow(A, g);
        double eB = g * (B - A) * std::pow(B, g - 1.0);
        double eA = g * (B - A) * std::pow(A, g - 1.0);
        if (g <= 1.0) check(eB, diff2, eA);
        if (g >= 1.0) check(eA, diff2, eB);
    }
    return res;
}

}  // namespace nevlab
