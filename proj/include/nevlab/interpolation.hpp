#ifndef NEVLAB_INTERPOLATION_HPP
#define NEVLAB_INTERPOLATION_HPP

#include <complex>
#include <functional>
#include <optional>
#include <vector>

#include "nevlab/products.hpp"

namespace nevlab {

using Evaluator = std::function<LogComplex(const LogComplex&)>;

// Exponent rule variant: the finite-order rule carries the genus offsets,
// the log-order rule does not.
enum class ExponentVariant { finite_order, log_order };

struct CauchySettings {
    int start_nodes = 32;
    int max_nodes = 2048;
    double tol = 1e-11;
    double range_guard = 4.0;  // max spread of log|f| on the circle before the
                               // radius is halved (keeps coefficients conditioned)
};

// f^{(0..max_order)}(center) by trapezoid quadrature on the circle of the
// given log-radius, doubling the node count until every order is stable.
// Values are rescaled by the largest magnitude on the circle, so centers at
// |z| = e^324 work like any other.
std::vector<LogComplex> cauchy_derivatives(const Evaluator& f, const LogComplex& center,
                                           double log_radius, int max_order,
                                           const CauchySettings& cs = {});

// sigma_k = -f''(z_k)/f'(z_k) through the closed series
// -2p/z_k + 2 sum_{n != k} (z_k/z_n)^p / (z_n - z_k), with a certified tail.
LogComplex target_sigma(const CanonicalProduct& f, std::size_t k);

// Smallest integers q_n >= 0 from the residue magnitudes; index n is
// 1-based position in the series. Points with |z_n| <= e get q_n = 0.
std::vector<long> ml_exponents(const std::vector<LogComplex>& residues,
                               const std::vector<double>& log_moduli, double alpha,
                               ExponentVariant variant, int genus);

struct InterpolationArtifacts {
    CanonicalProduct product;  // P is f itself
    std::size_t K = 0;
    double alpha = 2.0;
    ExponentVariant variant = ExponentVariant::finite_order;
    std::vector<LogComplex> zeros;
    std::vector<double> gap_log;  // log distance to the nearest other zero
    std::vector<LogComplex> sigma;
    std::vector<LogComplex> deriv;    // P'(z_k)
    std::vector<LogComplex> residue;  // c_k = sigma_k / P'(z_k)
    std::vector<long> exponent;       // q_k
    std::vector<char> dropped;        // zero targets: A keeps the product zero there

    // diagnostics
    std::vector<double> interp_residual;     // |A(z_k)-sigma_k|/|sigma_k|, tighter P'
    std::vector<double> numerator_residual;  // |f''+A f'|/|f''| at z_k, Cauchy route
    double probe_margin = 0.0;               // |A(zeta)+f''/f'(zeta)| relative, at the probe
    bool nontrivial_A = false;
    bool nontrivial_B = false;
    double majorant_value = 0.0;         // I(alpha r) or F(alpha r) bookkeeping at r = |z_K|
    double predicted_order_bound = 0.0;  // growth bound the majorant predicts for A
};

InterpolationArtifacts build_coefficients(const CanonicalProduct& f, std::size_t K,
                                          double alpha = 2.0,
                                          ExponentVariant variant = ExponentVariant::finite_order,
                                          std::optional<double> witness_C = std::nullopt,
                                          double witness_q = 0.0);

// Same pipeline with caller-supplied targets (zero targets exercise the
// product-side routing).
InterpolationArtifacts build_from_targets(const CanonicalProduct& f,
                                          std::vector<LogComplex> sigma, double alpha,
                                          ExponentVariant variant,
                                          std::optional<double> witness_C = std::nullopt,
                                          double witness_q = 0.0);

// H(z) = sum c_n/(z - z_n) (z/z_n)^{q_n} over the materialized terms.
LogComplex eval_H(const InterpolationArtifacts& art, const LogComplex& z);
// A = P H; at materialized zeros the limit value P'(z_k) c_k = sigma_k.
LogComplex eval_A(const InterpolationArtifacts& art, const LogComplex& z);
LogComplex A_at_zero(const InterpolationArtifacts& art, std::size_t k);
// B = -(f'' + A f')/f away from zeros; the removable-singularity formula
// B(z_k) = -(f''' + A f'' + A' f')/f' at materialized zeros.
LogComplex eval_B(const InterpolationArtifacts& art, const LogComplex& z,
                  const CauchySettings& cs = {});
LogComplex B_at_zero(const InterpolationArtifacts& art, std::size_t k,
                     const CauchySettings& cs = {});

struct OdeResidualReport {
    double max_residual = 0.0;
    std::vector<double> per_point;
    std::vector<char> flagged;  // quadrature non-convergence
};

// coeffs[j] multiplies f^{(j)}; the equation order is coeffs.size().
// Residual at each point: |f^{(n)} + sum_j coeffs_j f^{(j)}| over
// max(|f^{(n)}|, max_j |coeffs_j f^{(j)}|), derivatives by Cauchy quadrature
// on circles of the given log-radii.
OdeResidualReport ode_residual(const std::vector<Evaluator>& coeffs, const Evaluator& f,
                               const std::vector<LogComplex>& points,
                               const std::vector<double>& log_radii,
                               const CauchySettings& cs = {});

// log distance from z to the nearest zero of the sequence.
double nearest_zero_log_dist(const SeqPtr& seq, const LogComplex& z);

}  // namespace nevlab

#endif
