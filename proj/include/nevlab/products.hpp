#ifndef NEVLAB_PRODUCTS_HPP
#define NEVLAB_PRODUCTS_HPP

#include <complex>
#include <cstdint>

#include "nevlab/errors.hpp"
#include "nevlab/logcomplex.hpp"
#include "nevlab/sequences.hpp"

namespace nevlab {

// A zero sequence with genus and truncation policy; evaluable anywhere.
struct CanonicalProduct {
    SeqPtr zeros;
    int genus = 0;
    double trunc_tol = 1e-10;          // target bound on the neglected log-magnitude tail
    std::int64_t max_terms = 2'000'000;
};

CanonicalProduct make_product(SeqPtr seq, double trunc_tol = 1e-10,
                              std::int64_t max_terms = 2'000'000);

struct ProductEval {
    LogComplex value;
    double err_bound = 0.0;    // absolute bound on the log-magnitude error
    std::int64_t terms = 0;    // factors evaluated explicitly
    bool asymptotic = false;   // Euler-Maclaurin path was used
};

// e_0(w) = 1, e_p(w) = exp(sum_{j<=p} w^j/j).
LogComplex weierstrass_factor(int p, const LogComplex& w);
// The exponent sum_{j<=p} w^j/j itself, in ordinary arithmetic.
std::complex<double> weierstrass_exponent(int p, const LogComplex& w);

// prod (1 - z/z_n) e_p(z/z_n). Value at 0 is exactly 1; z exactly on a zero
// yields the exact zero (-inf, 0). Direct summation runs until the certified
// tail bound drops below trunc_tol; the Lindelof kind switches to closed-form
// + Euler-Maclaurin pieces when the explicit head would exceed max_terms
// (its polynomially decaying tail is summed analytically either way).
ProductEval eval_product(const CanonicalProduct& f, const LogComplex& z);

// Magnitude-only evaluation (skips phase work in the hot loops).
ProductEval eval_magnitude(const CanonicalProduct& f, const LogComplex& z);

// P_{m,b}(z) = prod_k (1 - z/(b e^{i phi_{m,k}})). Direct summation for
// m <= 1e6; beyond that, positive real z is handled by an angle-integral
// aggregation whose error bound is reported alongside.
struct PolyFactorEval {
    LogComplex value;
    double err_bound = 0.0;
};
PolyFactorEval eval_poly_factor(std::int64_t m, double log_b, const LogComplex& z);

// f'(z_k) = -(e_p(1)/z_k) prod_{n != k} (1 - z_k/z_n) e_p(z_k/z_n).
LogComplex derivative_at_zero(const CanonicalProduct& f, std::size_t k);

// Cofactor magnitude log sum_{n != k} log|(1 - z_k/z_n) e_p(z_k/z_n)|,
// i.e. log(|z_k f'(z_k)|) - log e_p(1). Exposed for the separation module.
double log_cofactor_magnitude(const CanonicalProduct& f, std::size_t k);

struct MaxModulus {
    double theta = 0.0;
    double log_max = kNegInf;
};
// Max of log|f| over a uniform theta grid (power of two, >= 8), refined by
// golden section around the grid argmax.
MaxModulus max_modulus_on_circle(const CanonicalProduct& f, double log_r, int n_theta);

namespace products_detail {
// d/dx and d^3/dx^3 of log(1 + W x^beta); exposed for the unit tests that
// pin the Euler-Maclaurin correction terms.
void em_log_derivs(const std::complex<double>& w, double beta, double x,
                   std::complex<double>& d1, std::complex<double>& d3);
}

}  // namespace nevlab

#endif
