#ifndef NEVLAB_NEVANLINNA_HPP
#define NEVLAB_NEVANLINNA_HPP

#include <complex>
#include <limits>
#include <functional>
#include <optional>
#include <vector>

#include "nevlab/products.hpp"

namespace nevlab {

// log-magnitude of some function on the circle of interest; the second
// argument accumulates evaluation error bounds.
using CircleFn = std::function<double(double theta, double& err_accum)>;

// Trapezoid means over the circle with grid doubling; nodes landing on a
// zero (non-finite value or a singular ray) are shifted by half a step and
// flagged. Convergence: successive levels differ by less than
// max(abs_tol, rel_tol * |value|) on all three means.
struct CircleStats {
    double mean_logplus = 0.0;   // (1/2pi) int log+ |g|
    double mean_logminus = 0.0;  // (1/2pi) int log+ 1/|g|
    double mean_log = 0.0;       // (1/2pi) int log |g|
    double achieved_tol = 0.0;
    int n_theta = 0;
    int perturbed = 0;
    bool converged = false;
};
// log_gate_abs additionally holds the kink-free log-mean to an absolute
// gate before stopping; infinity (the default) disables it. Use a finite
// gate for Jensen-identity work at radii where the circle stays away from
// zeros; at astronomic radii the unclipped mean cannot converge (the circle
// passes exponentially close to zeros in angle) and only the clipped means
// are meaningful.
CircleStats circle_quadrature(const CircleFn& fn, int n_start, double abs_tol, double rel_tol,
                              int max_n = 1 << 17,
                              double log_gate_abs = std::numeric_limits<double>::infinity());

// One radius worth of Nevanlinna data. T = m_inf for entire functions (no
// pole term); jensen_residual = m_inf - m_zero - N, meaningful for target 0.
struct CharacteristicSample {
    double log_r = 0.0;
    double n_count = 0.0;
    double N_zeros = 0.0;
    double m_inf = 0.0;
    double m_target = 0.0;
    double T = 0.0;
    double jensen_residual = 0.0;
    int n_theta = 0;
    int perturbed = 0;
    bool converged = false;
};

double count_zeros(const SeqPtr& seq, double log_r);
double integrated_counting(const SeqPtr& seq, double log_r);

struct ProximityResult {
    double value = 0.0;
    double achieved_tol = 0.0;
    int n_theta = 0;
    int perturbed = 0;
    bool converged = false;
};

// m(r, f, c): circle average of log+ 1/|f - c| (or log+ |f| for c = infinity,
// passed as nullopt). n_theta: starting grid, power of two >= 64.
ProximityResult proximity(const CanonicalProduct& f, double log_r,
                          std::optional<std::complex<double>> target, int n_theta,
                          double abs_tol = 1e-8, double rel_tol = 1e-6);

CharacteristicSample characteristic_sample(const CanonicalProduct& f, double log_r, int n_theta,
                                           double abs_tol = 1e-8, double rel_tol = 1e-6,
                                           double log_gate_abs = std::numeric_limits<double>::infinity());

struct DeficiencyScan {
    std::complex<double> target{0.0, 0.0};
    std::vector<CharacteristicSample> samples;
    std::vector<double> ratio;  // N(r,f,c)/T(r,f) per grid point
    std::vector<char> excluded;
    std::size_t tail_window = 0;       // number of trailing points examined
    double delta_N_lower = 0.0;        // 1 - sup N/T over the tail window
    double delta_V_lower = 0.0;        // 1 - inf N/T over the tail window
    bool tail_monotone = false;        // strictly monotone ratios over the window
};

// For c = 0 the counting function is closed-form; other targets use the
// Jensen route N(r,1/(f-c)) = mean log|f-c| - log|1-c| (f(0) = 1).
DeficiencyScan deficiency_scan(const CanonicalProduct& f, std::complex<double> c,
                               const std::vector<double>& log_r_grid, int n_theta);

// Closed form for delta_N(0, L_rho): with the integer q < rho <= q+1,
// 1 - |sin(pi rho)|/(q + |sin(pi rho)|) on (q, q+1/2], else
// 1 - |sin(pi rho)|/(q+1).
double delta_N_lindelof_closed_form(double rho);

struct GrowthEstimate {
    double slope = 0.0;
    std::size_t used = 0;
};

// Least-squares slope of log T(r) against log r (order) or log log r
// (logarithmic order); grid must span >= 3 usable decades of points.
GrowthEstimate order_estimate(const CanonicalProduct& f, const std::vector<double>& log_r_grid,
                              int n_theta);
GrowthEstimate log_order_estimate(const CanonicalProduct& f,
                                  const std::vector<double>& log_r_grid, int n_theta);

// Zero-counting variants: slope of log n(r) against log r estimates the
// exponent of convergence; against log log r (+1) the logarithmic order.
GrowthEstimate lambda_estimate(const SeqPtr& seq, const std::vector<double>& log_r_grid);
GrowthEstimate log_order_from_counts(const SeqPtr& seq, const std::vector<double>& log_r_grid);

// Same estimators over an arbitrary log-magnitude function (used for the
// reconstructed coefficients A and B).
using MagFn = std::function<double(double log_r, double theta)>;
GrowthEstimate order_estimate_fn(const MagFn& g, const std::vector<double>& log_r_grid,
                                 int n_theta, int max_n);
GrowthEstimate log_order_estimate_fn(const MagFn& g, const std::vector<double>& log_r_grid,
                                     int n_theta, int max_n);

}  // namespace nevlab

#endif
