#ifndef NEVLAB_SEPARATION_HPP
#define NEVLAB_SEPARATION_HPP

#include <cstddef>
#include <optional>
#include <vector>

#include "nevlab/products.hpp"
#include "nevlab/sequences.hpp"

namespace nevlab {

// Weight w(x) in the tempering factor e^{C w(|z_k|)}: |z_k|^q, (log(1+|z_k|))^q,
// or the refined Lindelof weight |z_k|^rho log |z_k|^rho.
enum class WeightKind { power, log_power, lindelof_refined };

// Per-k pieces that do not depend on C, so constant sweeps are cheap:
// base_k = log(|z_k| |f'(z_k)|), w_k = w(|z_k|).
struct SeparationBasis {
    std::vector<double> base;
    std::vector<double> w;
    std::vector<char> excluded;  // derivative truncation failures
};

SeparationBasis separation_basis(const SeqPtr& seq, WeightKind weight, double q, std::size_t K);

struct SeparationReport {
    WeightKind weight_kind = WeightKind::power;
    double q = 0.0;
    double C = 0.0;
    std::size_t K = 0;
    std::vector<double> per_k;  // log(|z_k| e^{C w(|z_k|)} |f'(z_k)|), index 0 is k = 1
    std::vector<char> excluded;
    double inf_log = 0.0;  // over included entries
    enum class Verdict { bounded_below, decaying, inconclusive };
    Verdict verdict = Verdict::inconclusive;
    double trend_slope = 0.0;   // fitted on the deepest half of the scan
    double trend_stderr = 0.0;
};

const char* to_string(SeparationReport::Verdict v);

SeparationReport separation_scan(const SeqPtr& seq, WeightKind weight, double q, double C,
                                 std::size_t K);
SeparationReport scan_with_constant(const SeparationBasis& basis, WeightKind weight, double q,
                                    double C);

// Smallest C in the geometric sweep {2^j : j = -10..40} with
// inf_{k >= min_k} per_k >= threshold; nullopt when every C fails.
std::optional<double> witness_constant_search(const SeqPtr& seq, WeightKind weight, double q,
                                              std::size_t K,
                                              double threshold = -0.6931471805599453,
                                              std::size_t min_k = 1);

// The three partial cofactor products for a zero on circle i (1-based,
// i >= 2): inner circles, outer circles, same-circle cofactors; all logs.
struct ACDecomposition {
    double log_p1 = 0.0;
    double log_p2 = 0.0;
    double log_p3 = 0.0;
};
ACDecomposition ac_separation_decomposition(const SeqPtr& seq, std::size_t circle_i,
                                            std::size_t j_on_circle);

}  // namespace nevlab

#endif
