#include "nevlab/nevanlinna.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <stdexcept>

#include "nevlab/kernels.hpp"

namespace nevlab {

namespace {

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

double pairwise_mean(const std::vector<double>& v) {
    return kernels::pairwise_sum(v) / static_cast<double>(v.size());
}

struct FitResult {
    double slope = 0.0;
    double stderr_ = 0.0;
    std::size_t used = 0;
};

FitResult least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    std::size_t n = x.size();
    if (n < 2) throw EstimationError("growth_estimate", "fewer than 2 usable points");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) throw EstimationError("growth_estimate", "degenerate abscissae");
    double slope = sxy / sxx;
    double ssr = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double r = y[i] - my - slope * (x[i] - mx);
        ssr += r * r;
    }
    double se = n > 2 ? std::sqrt(ssr / static_cast<double>(n - 2) / sxx) : 0.0;
    return {slope, se, n};
}

}  // namespace

CircleStats circle_quadrature(const CircleFn& fn, int n_start, double abs_tol, double rel_tol,
                              int max_n, double log_gate_abs) {
    if (!power_of_two(n_start) || n_start < 8)
        throw std::domain_error("circle_quadrature: n_start must be a power of two >= 8");

    std::vector<double> vals;
    std::vector<char> pert;
    std::vector<double> errs;
    std::string failure;

    auto eval_node = [&](double theta, double h, double& err, char& flagged) -> double {
        double shifts[3] = {0.0, 0.5 * h, h / 3.0};
        for (int a = 0; a < 3; ++a) {
            try {
                double e = 0.0;
                double v = fn(wrap_phase(theta + shifts[a]), e);
                if (std::isfinite(v)) {
                    if (a > 0) flagged = 1;
                    err += e;
                    return v;
                }
            } catch (const SingularityError&) {
            }
            // fall through to the next shift
        }
        throw QuadratureError("circle_quadrature", "node unusable after perturbation");
    };

    CircleStats out;
    double prev_p = 0.0, prev_m = 0.0, prev_l = 0.0;
    bool have_prev = false;

    for (int n = n_start; n <= max_n; n *= 2) {
        const double h = 2.0 * kPi / n;
        std::vector<double> nv(static_cast<std::size_t>(n));
        std::vector<char> np(static_cast<std::size_t>(n), 0);
        std::vector<double> ne(static_cast<std::size_t>(n), 0.0);
        const bool refine = !vals.empty();
        std::exception_ptr eptr = nullptr;
        kernels::parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
            try {
                if (refine && i % 2 == 0 && !pert[i / 2]) {
                    nv[i] = vals[i / 2];
                    ne[i] = errs[i / 2];
                    return;
                }
                double theta = -kPi + h * static_cast<double>(i);
                nv[i] = eval_node(theta, h, ne[i], np[i]);
            } catch (...) {
#pragma omp critical
                if (!eptr) eptr = std::current_exception();
            }
        });
        if (eptr) std::rethrow_exception(eptr);
        vals = std::move(nv);
        pert = std::move(np);
        errs = std::move(ne);

        std::vector<double> plus(vals.size()), minus(vals.size());
        for (std::size_t i = 0; i < vals.size(); ++i) {
            plus[i] = std::max(0.0, vals[i]);
            minus[i] = std::max(0.0, -vals[i]);
        }
        double mp = pairwise_mean(plus);
        double mm = pairwise_mean(minus);
        double ml = pairwise_mean(vals);
        double me = pairwise_mean(errs);

        out.mean_logplus = mp;
        out.mean_logminus = mm;
        out.mean_log = ml;
        out.n_theta = n;
        out.perturbed = 0;
        for (char c : pert) out.perturbed += c;

        if (have_prev) {
            double d = std::max({std::abs(mp - prev_p), std::abs(mm - prev_m),
                                 std::abs(ml - prev_l)});
            double gate = std::max(abs_tol, rel_tol * std::max({std::abs(mp), std::abs(mm),
                                                                std::abs(ml)}));
            // the clipped means carry log+ kinks and converge quadratically;
            // the plain log mean is kink-free and feeds the Jensen identity,
            // so hold it to a much tighter gate (it converges geometrically)
            double dlog = std::abs(ml - prev_l);
            double gate_log = std::max(log_gate_abs, 1e-13 * std::abs(ml));
            out.achieved_tol = d + me;
            if (d < gate && dlog < gate_log) {
                out.converged = true;
                return out;
            }
        }
        prev_p = mp;
        prev_m = mm;
        prev_l = ml;
        have_prev = true;
    }
    out.converged = false;  // flagged, never silent
    return out;
}

double count_zeros(const SeqPtr& seq, double log_r) { return seq->count_below(log_r); }

double integrated_counting(const SeqPtr& seq, double log_r) {
    return seq->integrated_count(log_r);
}

namespace {

CircleFn magnitude_fn(const CanonicalProduct& f, double log_r) {
    return [&f, log_r](double theta, double& err) {
        ProductEval e = eval_magnitude(f, lc_from_polar(log_r, theta));
        err += e.err_bound;
        return e.value.log_mag;
    };
}

CircleFn shifted_fn(const CanonicalProduct& f, double log_r, std::complex<double> c) {
    LogComplex mc = lc_neg(lc_from(c));
    return [&f, log_r, mc](double theta, double& err) {
        ProductEval e = eval_product(f, lc_from_polar(log_r, theta));
        err += e.err_bound;
        return lc_add(e.value, mc).log_mag;
    };
}

}  // namespace

ProximityResult proximity(const CanonicalProduct& f, double log_r,
                          std::optional<std::complex<double>> target, int n_theta, double abs_tol,
                          double rel_tol) {
    if (!power_of_two(n_theta) || n_theta < 64)
        throw std::domain_error("proximity: n_theta must be a power of two >= 64");
    CircleStats st;
    double value;
    if (!target) {
        st = circle_quadrature(magnitude_fn(f, log_r), n_theta, abs_tol, rel_tol);
        value = st.mean_logplus;
    } else if (*target == std::complex<double>(0.0, 0.0)) {
        st = circle_quadrature(magnitude_fn(f, log_r), n_theta, abs_tol, rel_tol);
        value = st.mean_logminus;
    } else {
        st = circle_quadrature(shifted_fn(f, log_r, *target), n_theta, abs_tol, rel_tol);
        value = st.mean_logminus;
    }
    return {value, st.achieved_tol, st.n_theta, st.perturbed, st.converged};
}

CharacteristicSample characteristic_sample(const CanonicalProduct& f, double log_r, int n_theta,
                                           double abs_tol, double rel_tol, double log_gate_abs) {
    CircleStats st = circle_quadrature(magnitude_fn(f, log_r), n_theta, abs_tol, rel_tol, 1 << 17,
                                       log_gate_abs);
    CharacteristicSample s;
    s.log_r = log_r;
    s.n_count = f.zeros->count_below(log_r);
    s.N_zeros = f.zeros->integrated_count(log_r);
    s.m_inf = st.mean_logplus;
    s.m_target = st.mean_logminus;
    s.T = st.mean_logplus;  // entire: no pole term
    // m - m0 collapses to the circle mean of log|f|, which has no log+ kinks
    // and converges geometrically; use it for the identity residual
    s.jensen_residual = st.mean_log - s.N_zeros;
    s.n_theta = st.n_theta;
    s.perturbed = st.perturbed;
    s.converged = st.converged;
    return s;
}

DeficiencyScan deficiency_scan(const CanonicalProduct& f, std::complex<double> c,
                               const std::vector<double>& log_r_grid, int n_theta) {
    if (log_r_grid.size() < 3)
        throw std::domain_error("deficiency_scan: grid needs at least 3 points");
    for (std::size_t i = 1; i < log_r_grid.size(); ++i)
        if (!(log_r_grid[i] > log_r_grid[i - 1]))
            throw std::domain_error("deficiency_scan: grid must be strictly increasing");

    DeficiencyScan scan;
    scan.target = c;
    const bool zero_target = c == std::complex<double>(0.0, 0.0);
    for (double lr : log_r_grid) {
        CharacteristicSample s = characteristic_sample(f, lr, n_theta);
        if (!zero_target) {
            CircleStats st = circle_quadrature(shifted_fn(f, lr, c), n_theta, 1e-8, 1e-6);
            s.N_zeros = st.mean_log - std::log(std::abs(std::complex<double>(1.0, 0.0) - c));
            s.m_target = st.mean_logminus;
            s.jensen_residual = std::numeric_limits<double>::quiet_NaN();
        }
        bool excl = false;
        double ratio = 0.0;
        if (s.T > 0.0) {
            ratio = s.N_zeros / s.T;
        } else if (s.N_zeros != 0.0) {
            excl = true;  // T <= 0 with zeros present: point unusable
        }
        scan.samples.push_back(s);
        scan.ratio.push_back(ratio);
        scan.excluded.push_back(excl ? 1 : 0);
    }

    std::size_t n = scan.ratio.size();
    scan.tail_window = (n + 2) / 3;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    std::vector<double> tail;
    for (std::size_t i = n - scan.tail_window; i < n; ++i) {
        if (scan.excluded[i]) continue;
        tail.push_back(scan.ratio[i]);
        lo = std::min(lo, scan.ratio[i]);
        hi = std::max(hi, scan.ratio[i]);
    }
    if (!tail.empty()) {
        scan.delta_N_lower = 1.0 - hi;
        scan.delta_V_lower = 1.0 - lo;
    } else {
        scan.delta_N_lower = scan.delta_V_lower = 1.0;
    }
    bool inc = true, dec = true;
    for (std::size_t i = 1; i < tail.size(); ++i) {
        inc = inc && tail[i] > tail[i - 1];
        dec = dec && tail[i] < tail[i - 1];
    }
    scan.tail_monotone = tail.size() >= 2 && (inc || dec);
    return scan;
}

double delta_N_lindelof_closed_form(double rho) {
    if (!(rho > 0.0)) throw std::domain_error("delta_N_lindelof_closed_form: rho must be positive");
    int q = static_cast<int>(std::ceil(rho)) - 1;
    double s = std::abs(std::sin(kPi * rho));
    if (rho <= q + 0.5) return 1.0 - s / (q + s);
    return 1.0 - s / (q + 1.0);
}

namespace {

GrowthEstimate estimate_from_T(const std::function<double(double)>& logT, bool log_log_axis,
                               const std::vector<double>& grid) {
    if (grid.size() < 3) throw EstimationError("growth_estimate", "grid needs >= 3 points");
    std::vector<double> x, y;
    for (double lr : grid) {
        double T = logT(lr);
        if (!(T > 0.0) || !std::isfinite(T)) continue;  // exclude nonpositive T
        double ax = log_log_axis ? std::log(lr) : lr;
        if (!std::isfinite(ax)) continue;
        x.push_back(ax);
        y.push_back(std::log(T));
    }
    if (x.size() < 3) throw EstimationError("growth_estimate", "fewer than 3 usable points");
    FitResult fit = least_squares(x, y);
    return {fit.slope, fit.used};
}

}  // namespace

GrowthEstimate order_estimate(const CanonicalProduct& f, const std::vector<double>& grid,
                              int n_theta) {
    return estimate_from_T(
        [&](double lr) { return characteristic_sample(f, lr, n_theta).T; }, false, grid);
}

GrowthEstimate log_order_estimate(const CanonicalProduct& f, const std::vector<double>& grid,
                                  int n_theta) {
    return estimate_from_T(
        [&](double lr) { return characteristic_sample(f, lr, n_theta).T; }, true, grid);
}

GrowthEstimate lambda_estimate(const SeqPtr& seq, const std::vector<double>& grid) {
    return estimate_from_T([&](double lr) { return seq->count_below(lr); }, false, grid);
}

GrowthEstimate log_order_from_counts(const SeqPtr& seq, const std::vector<double>& grid) {
    GrowthEstimate g =
        estimate_from_T([&](double lr) { return seq->count_below(lr); }, true, grid);
    g.slope += 1.0;  // rho_log = lambda_log + 1
    return g;
}

namespace {

double T_of_fn(const MagFn& g, double log_r, int n_theta, int max_n) {
    CircleFn fn = [&g, log_r](double theta, double&) { return g(log_r, theta); };
    return circle_quadrature(fn, n_theta, 1e-8, 1e-6, max_n).mean_logplus;
}

}  // namespace

GrowthEstimate order_estimate_fn(const MagFn& g, const std::vector<double>& grid, int n_theta,
                                 int max_n) {
    return estimate_from_T([&](double lr) { return T_of_fn(g, lr, n_theta, max_n); }, false, grid);
}

GrowthEstimate log_order_estimate_fn(const MagFn& g, const std::vector<double>& grid, int n_theta,
                                     int max_n) {
    return estimate_from_T([&](double lr) { return T_of_fn(g, lr, n_theta, max_n); }, true, grid);
}

}  // namespace nevlab
