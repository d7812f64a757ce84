#ifndef NEVLAB_SEQUENCES_HPP
#define NEVLAB_SEQUENCES_HPP

#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nevlab/logcomplex.hpp"

namespace nevlab {

enum class SeqKind { lindelof, bank, geometric, paired_geometric, anderson_clunie, explicit_list };

// Gap rules for the paired geometric sequences: ex1 uses gap_n =
// min(1/2, 2^n exp(-2^{nq})) (lower endpoint of the allowed range),
// exa2 uses eps_n = min(1/2, 2^n exp(-(n log 2)^q)).
enum class PairedRule { ex1, exa2 };

// A zero whose distance to a partner zero is only representable in logs.
struct PairInfo {
    std::size_t partner;
    double log_gap;  // log |z_partner - z_k|
};

// Multiplicity c_n: exact in a 128-bit register while it fits, flagged
// real-valued afterwards.
struct MultEntry {
    double value = 0.0;
    bool exact = false;
    unsigned __int128 ivalue = 0;  // valid only when exact
};

struct ACParameters {
    double rho = 0.0;
    double beta = 0.0;   // 2(rho-1)/(rho-2)
    double gamma = 0.0;  // 2/(rho-2)
    std::vector<double> log_b;      // log b_n, n = 1.. (index 0 is n=1)
    std::vector<MultEntry> mult;    // c_n
    std::vector<double> cum_count;  // sum_{j<=n} c_j
};

// The b_n / c_n recurrence: b_1 = c_1 = 1, log b_n = (sum_{j<n} c_j)^gamma,
// c_n = floor((log b_n)^{rho-1}). rho > 2, n_max >= 2.
ACParameters ac_parameters(double rho, int n_max);

// Arguments of the m zeros spread over [3pi/4, 5pi/4]; ascending, constant
// gap pi/(2(m-1)) for m >= 2, and {pi} for m = 1.
std::vector<double> ac_angles(std::int64_t m);
double ac_angle(std::int64_t m, std::int64_t i);  // i = 1..m

class ZeroSequence {
public:
    virtual ~ZeroSequence() = default;

    SeqKind kind() const { return kind_; }
    int genus() const { return genus_; }
    // Both genus candidates where the heuristic cannot decide (finite lists
    // with lambda possibly integral); a single entry otherwise.
    virtual std::vector<int> genus_candidates() const { return {genus_}; }
    double convergence_exponent() const { return lambda_; }
    double log_convergence_exponent() const { return lambda_log_; }

    virtual bool is_finite() const { return false; }
    // Largest count of individually enumerable points.
    virtual std::size_t enum_cap() const { return std::size_t(1) << 52; }

    // k-th point (0-based), nondecreasing modulus; same-circle ties ordered
    // by increasing argument in [3pi/4, 5pi/4].
    virtual LogComplex point_lc(std::size_t k) const = 0;
    std::complex<double> point(std::size_t k) const { return to_complex(point_lc(k)); }
    virtual double log_modulus(std::size_t k) const { return point_lc(k).log_mag; }
    virtual std::optional<PairInfo> pair(std::size_t /*k*/) const { return std::nullopt; }

    // n(r): number of points with modulus < r, as a real (integer-valued
    // while exact).
    virtual double count_below(double log_r) const = 0;
    // N(r, 1/f) = sum_{|z_n| <= r} (log r - log |z_n|); closed-form per kind.
    virtual double integrated_count(double log_r) const;
    // log of a certified upper bound on sum_{n >= first} |z_n|^{-s}
    // (0-based first). +inf when no finite bound is available at this s.
    virtual double recip_power_tail_log(std::size_t first, double s) const = 0;

protected:
    ZeroSequence(SeqKind k, int genus, double lambda, double lambda_log)
        : kind_(k), genus_(genus), lambda_(lambda), lambda_log_(lambda_log) {}

    SeqKind kind_;
    int genus_;
    double lambda_;
    double lambda_log_;
};

using SeqPtr = std::shared_ptr<const ZeroSequence>;

// z_k = -k^{1/rho}, genus floor(rho); rho > 1/2.
SeqPtr lindelof_zeros(double rho);

// z_{2n-1} = 2^n, z_{2n} = 2^n + eps_n with eps_n = min(cap, exp(-exp(2^n))),
// stored as log eps_n. The default cap 2^-60 keeps the strict bound
// 0 < eps_n < exp(-exp(2^n)) at every n.
SeqPtr bank_zeros(double log_eps_cap = -60.0 * 0.6931471805599453);

// z_n = ratio^n e^{i phase}, n >= 1.
SeqPtr geometric_zeros(double ratio = 2.0, double phase = 0.0);

// union of {2^n} and {2^n + gap_n} under the selected rule; q > 0.
SeqPtr paired_geometric_zeros(double q, PairedRule rule = PairedRule::exa2);

// Zeros of prod_n P_{c_n, b_n}: c_n simple points on |z| = b_n. rho > 2.
SeqPtr anderson_clunie_zeros(double rho, int n_max);

// User-supplied points; duplicates and zero rejected; genus heuristic.
SeqPtr explicit_zeros(std::vector<std::complex<double>> points);
// File format: one zero per line, "re im [multiplicity]", '#' comments;
// multiplicities other than 1 are rejected (simple zeros only).
SeqPtr explicit_zeros_from_file(const std::string& path);

// Extra structure of the Anderson-Clunie sequence used by the product and
// separation fast paths.
class ACZeros;
const ACZeros* as_ac(const ZeroSequence& s);

class ACZeros : public ZeroSequence {
public:
    ACZeros(double rho, int n_max);

    const ACParameters& params() const { return params_; }
    std::size_t n_circles() const { return params_.log_b.size(); }
    double circle_log_b(std::size_t i) const { return params_.log_b[i]; }       // 0-based circle
    double circle_count(std::size_t i) const { return params_.mult[i].value; }
    bool circle_materialized(std::size_t i) const { return i < angles_.size(); }
    std::span<const double> circle_angles(std::size_t i) const { return angles_[i]; }
    std::size_t circle_first_index(std::size_t i) const;
    // log of a bound on sum over all circles beyond the stored ones of c/b^s.
    double beyond_tail_log(double s) const;

    std::size_t enum_cap() const override { return materialized_count_; }
    LogComplex point_lc(std::size_t k) const override;
    double count_below(double log_r) const override;
    double integrated_count(double log_r) const override;
    double recip_power_tail_log(std::size_t first, double s) const override;

private:
    ACParameters params_;
    std::vector<std::vector<double>> angles_;  // materialized circles only
    std::size_t materialized_count_ = 0;
    double next_log_b_ = 0.0;  // log b_{n_max+1}, for tail bounds
    double next_log_c_ = 0.0;  // log c_{n_max+1}
};

// Property oracle for the elementary power-mean inequalities: random
// (k > n, alpha) integer triples and (0 < A < B, gamma) real triples,
// counting violations beyond a 4-ulp slack.
struct PowerInequalityResult {
    long violations = 0;
    long checks = 0;
};
PowerInequalityResult check_power_inequalities(long samples, std::uint64_t seed = 12345);

}  // namespace nevlab

#endif
