#ifndef NEVLAB_ZETA_HPP
#define NEVLAB_ZETA_HPP

namespace nevlab {

// log of the Hurwitz zeta function zeta(s, a) = sum_{k>=0} (a+k)^{-s},
// s > 1, a >= 1. Euler-Maclaurin with the shift point chosen so the
// Bernoulli series converges; relative accuracy ~1e-14 for s up to ~300.
double log_hurwitz_zeta(double s, double a);

// zeta(s, a) itself; may underflow to 0 for large s*log(a).
double hurwitz_zeta(double s, double a);

// sum_{k=a..b} k^{-s} for integer endpoints given as doubles, s >= 0.
// Direct below 200k terms, Euler-Maclaurin with three Bernoulli
// corrections above.
double finite_recip_power_sum(double s, double a, double b);

// sum_{k=a..b} log k = lgamma(b+1) - lgamma(a).
double finite_log_sum(double a, double b);

}  // namespace nevlab

#endif
