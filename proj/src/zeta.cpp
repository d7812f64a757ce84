#include "nevlab/zeta.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace nevlab {

namespace {

// B_{2j}/(2j)! for j = 1..9.
constexpr double kBern[] = {
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30240.0,
    -1.0 / 1209600.0,
    1.0 / 47900160.0,
    -691.0 / 1307674368000.0,
    1.0 / 74724249600.0,
    -3617.0 / 10670622842880000.0,
    43867.0 / 5109094217170944000.0,
};

}  // namespace

double log_hurwitz_zeta(double s, double a) {
    if (!(s > 1.0) || !(a >= 1.0))
        throw std::domain_error("log_hurwitz_zeta: requires s > 1, a >= 1");
    // Shift to A = a + M with A >= max(2.5 s, 25) so the Bernoulli tail decays
    // like ((s+2j)/(2 pi A))^2 per term.
    double M = std::max(0.0, std::ceil(std::max(2.5 * s, 25.0) - a));
    double A = a + M;
    // zeta(s,a) = A^{-s} * [ sum_{k<M} (A/(a+k))^s + A/(s-1) + 1/2 + Bernoulli ].
    // The finite sum is assembled by log-sum-exp since (A/a)^s can be huge.
    double lse = -std::numeric_limits<double>::infinity();
    {
        // t_k = s*log(A/(a+k)) is decreasing in k; t_0 is the max.
        double t0 = s * std::log(A / a);
        double acc = 0.0;
        for (double k = 0.0; k < M; k += 1.0)
            acc += std::exp(s * std::log(A / (a + k)) - t0);
        if (M > 0.0) lse = t0 + std::log(acc);
    }
    double rest = A / (s - 1.0) + 0.5;
    double poch = s;         // (s)_{2j-1} = s (s+1) ... (s+2j-2)
    double apow = 1.0 / A;   // A^{1-2j}
    for (int j = 1; j <= 9; ++j) {
        double term = kBern[j - 1] * poch * apow;
        rest += term;
        if (std::abs(term) < 1e-17 * rest) break;
        poch *= (s + 2.0 * j - 1.0) * (s + 2.0 * j);
        apow /= A * A;
    }
    double lbracket;
    if (lse == -std::numeric_limits<double>::infinity()) {
        lbracket = std::log(rest);
    } else {
        double lrest = std::log(rest);
        double hi = std::max(lse, lrest), lo = std::min(lse, lrest);
        lbracket = hi + std::log1p(std::exp(lo - hi));
    }
    return -s * std::log(A) + lbracket;
}

double hurwitz_zeta(double s, double a) { return std::exp(log_hurwitz_zeta(s, a)); }

double finite_recip_power_sum(double s, double a, double b) {
    if (b < a) return 0.0;
    if (!(s >= 0.0) || !(a >= 1.0)) throw std::domain_error("finite_recip_power_sum: s >= 0, a >= 1");
    double count = b - a + 1.0;
    if (count <= 200000.0) {
        // ascending magnitudes: add the small terms first
        double sum = 0.0;
        for (double k = b; k >= a; k -= 1.0) sum += std::pow(k, -s);
        return sum;
    }
    // Euler-Maclaurin on f(x) = x^{-s} over [a, b].
    double L = std::log(b / a);
    double integral;
    if (std::abs(1.0 - s) < 1e-12) {
        integral = L;
    } else {
        integral = std::pow(a, 1.0 - s) * std::expm1((1.0 - s) * L) / (1.0 - s);
    }
    double fa = std::pow(a, -s), fb = std::pow(b, -s);
    double sum = integral + 0.5 * (fa + fb);
    // f'(x) = -s x^{-s-1}, f'''(x) = -s(s+1)(s+2) x^{-s-3}, f^{(5)} similar.
    double c1 = s, c3 = s * (s + 1.0) * (s + 2.0), c5 = c3 * (s + 3.0) * (s + 4.0);
    sum += kBern[0] * (-c1) * (std::pow(b, -s - 1.0) - std::pow(a, -s - 1.0));
    sum += kBern[1] * (-c3) * (std::pow(b, -s - 3.0) - std::pow(a, -s - 3.0));
    sum += kBern[2] * (-c5) * (std::pow(b, -s - 5.0) - std::pow(a, -s - 5.0));
    return sum;
}

double finite_log_sum(double a, double b) {
    if (b < a) return 0.0;
    return std::lgamma(b + 1.0) - std::lgamma(a);
}

}  // namespace nevlab
