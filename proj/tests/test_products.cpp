#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "nevlab/products.hpp"

using namespace nevlab;
using cd = std::complex<double>;

namespace {
constexpr double kGamma = 0.5772156649015328606;  // Euler-Mascheroni

double rel_diff(double a, double b) {
    if (a == b) return 0.0;
    return std::abs(a - b) / std::max(std::abs(a), std::abs(b));
}
}  // namespace

TEST_CASE("weierstrass factors") {
    CHECK(weierstrass_factor(0, {3.0, 1.0}).log_mag == 0.0);  // e_0 = 1
    LogComplex e1 = weierstrass_factor(1, {0.0, 0.0});        // w = 1
    CHECK(e1.log_mag == doctest::Approx(1.0));
    CHECK(e1.phase == doctest::Approx(0.0));
    LogComplex e2 = weierstrass_factor(2, {0.0, 0.0});
    CHECK(e2.log_mag == doctest::Approx(1.5));  // exp(1 + 1/2)
}

TEST_CASE("empty products and exact zero hits") {
    CanonicalProduct one = make_product(explicit_zeros({{5.0, 0.0}}));
    ProductEval at0 = eval_product(one, lc_zero());
    CHECK(at0.value.log_mag == 0.0);  // exactly 1
    CHECK(at0.value.phase == 0.0);

    // Lindelof rho = 1 (genus 1) at z = -1: the first factor vanishes
    CanonicalProduct L1 = make_product(lindelof_zeros(1.0));
    ProductEval hit = eval_product(L1, lc_from(cd{-1.0, 0.0}));
    CHECK(lc_is_zero(hit.value));
    CHECK(hit.value.phase == 0.0);
}

TEST_CASE("single-zero product against closed form") {
    // f = 1 - z with a zero at +1
    CanonicalProduct f = make_product(explicit_zeros({{1.0, 0.0}}));
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int i = 0; i < 200; ++i) {
        cd z{u(rng), u(rng)};
        cd expect = 1.0 - z;
        cd got = to_complex(eval_product(f, lc_from(z)).value);
        CHECK(std::abs(got - expect) <= 1e-13 * std::abs(expect));
    }
    MaxModulus mm = max_modulus_on_circle(f, std::log(2.0), 64);
    CHECK(std::abs(wrap_phase(mm.theta - kPi)) < 1e-6);
    CHECK(mm.log_max == doctest::Approx(std::log(3.0)).epsilon(1e-9));
}

TEST_CASE("poly factor values and sandwich bound") {
    // m = 1, b = 1, z = 1: the factor 1 + z
    PolyFactorEval p1 = eval_poly_factor(1, 0.0, lc_from(cd{1.0, 0.0}));
    CHECK(to_complex(p1.value).real() == doctest::Approx(2.0).epsilon(1e-14));

    // m = 2: direct complex oracle over phi = 3pi/4, 5pi/4 gives 2 + sqrt 2
    cd oracle = (1.0 - std::polar(1.0, -0.75 * kPi)) * (1.0 - std::polar(1.0, -1.25 * kPi));
    CHECK(oracle.real() == doctest::Approx(2.0 + std::sqrt(2.0)).epsilon(1e-15));
    CHECK(std::abs(oracle.imag()) < 1e-15);
    PolyFactorEval p2 = eval_poly_factor(2, 0.0, lc_from(cd{1.0, 0.0}));
    CHECK(p2.value.log_mag == doctest::Approx(std::log(2.0 + std::sqrt(2.0))).epsilon(1e-13));

    // sandwich (m/2) log(1+r^2/b^2) <= log P <= m log(1+r/b), 100 random triples
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> um(1.0, 50.0), ub(0.0, 10.0), ur(-1.0, 1.0);
    int violations = 0;
    for (int i = 0; i < 100; ++i) {
        auto m = static_cast<std::int64_t>(um(rng));
        double log_b = ub(rng);
        double log_r = log_b + std::log(10.0) * ur(rng);
        double lp = eval_poly_factor(m, log_b, lc_from_polar(log_r, 0.0)).value.log_mag;
        double x = std::exp(log_r - log_b);
        double lo = 0.5 * m * std::log1p(x * x);
        double hi = static_cast<double>(m) * std::log1p(x);
        double slack = 4.0 * 2.22e-16 * std::max({std::abs(lo), std::abs(hi), std::abs(lp)});
        if (!(lp >= lo - slack && lp <= hi + slack)) ++violations;
    }
    CHECK(violations == 0);
}

TEST_CASE("poly factor integral aggregation matches a direct sum") {
    const std::int64_t m = 1'200'000;
    const double log_b = 2.0, log_r = 2.7;
    PolyFactorEval agg = eval_poly_factor(m, log_b, lc_from_polar(log_r, 0.0));
    double direct = 0.0;
    for (std::int64_t i = m; i >= 1; --i)
        direct += log_abs_one_minus({log_r - log_b, wrap_phase(-ac_angle(m, i))});
    CHECK(rel_diff(agg.value.log_mag, direct) < 1e-8);
    CHECK(std::abs(agg.value.log_mag - direct) <= std::max(agg.err_bound, 1e-6 * std::abs(direct)));
    CHECK_THROWS_AS(eval_poly_factor(m, log_b, lc_from_polar(log_r, 1.0)), std::domain_error);
}

TEST_CASE("AC product: positivity bound on the positive axis") {
    CanonicalProduct f = make_product(anderson_clunie_zeros(3.0, 4));
    ACParameters P = ac_parameters(3.0, 4);
    for (double log_r : {2.0, 10.0}) {
        double lf = eval_product(f, lc_from_polar(log_r, 0.0)).value.log_mag;
        double bound = 0.0;
        for (std::size_t i = 0; i < 4; ++i) {
            double x = std::exp(2.0 * (log_r - P.log_b[i]));
            bound += 0.5 * P.mult[i].value * std::log1p(x);
        }
        CHECK(lf >= bound - 1e-9 * std::abs(bound));
    }
}

TEST_CASE("AC product agrees with an explicit-list product over the same zeros") {
    SeqPtr ac = anderson_clunie_zeros(3.0, 3);
    std::vector<cd> pts;
    for (std::size_t k = 0; k < 18; ++k) pts.push_back(to_complex(ac->point_lc(k)));
    CanonicalProduct fa = make_product(ac);
    CanonicalProduct fe = make_product(explicit_zeros(pts));
    REQUIRE(fe.genus == 0);
    for (double th : {0.0, 0.7, -2.0}) {
        LogComplex z = lc_from_polar(1.2, th);
        LogComplex va = eval_product(fa, z).value;
        LogComplex ve = eval_product(fe, z).value;
        CHECK(rel_diff(va.log_mag, ve.log_mag) < 1e-9);
        CHECK(std::abs(wrap_phase(va.phase - ve.phase)) < 1e-9);
    }
}

TEST_CASE("conjugate symmetry for conjugate-closed zero sets") {
    for (const SeqPtr& s :
         {anderson_clunie_zeros(3.0, 4), bank_zeros(), lindelof_zeros(0.75)}) {
        CanonicalProduct f = make_product(s);
        for (double th : {0.4, 1.9, 2.9}) {
            LogComplex up = eval_product(f, lc_from_polar(1.5, th)).value;
            LogComplex dn = eval_product(f, lc_from_polar(1.5, -th)).value;
            CHECK(rel_diff(up.log_mag, dn.log_mag) < 1e-12);
            CHECK(std::abs(wrap_phase(up.phase + dn.phase)) < 1e-12);
        }
    }
}

TEST_CASE("Lindelof rho = 1 against the Weierstrass gamma-product identity") {
    // prod (1 + r/n) e_1(-r/n) = exp(-gamma r) / Gamma(1 + r)
    CanonicalProduct L1 = make_product(lindelof_zeros(1.0), 1e-12);
    for (double r : {0.5, 2.5, 5.5, 9.125}) {
        double expect = -kGamma * r - std::lgamma(1.0 + r);
        ProductEval got = eval_product(L1, lc_from_polar(std::log(r), 0.0));
        CHECK(got.value.log_mag == doctest::Approx(expect).epsilon(1e-11));
        CHECK(std::abs(got.value.phase) < 1e-12);
    }
}

TEST_CASE("Lindelof split-point consistency of the analytic tail") {
    // the same value must come out wherever the head/tail split lands
    SeqPtr s = lindelof_zeros(0.75);
    CanonicalProduct small = make_product(s, 1e-12, 30000);
    CanonicalProduct large = make_product(s, 1e-12, 2'000'000);
    for (double th : {0.3, 2.2}) {
        LogComplex z = lc_from_polar(std::log(500.0), th);  // K2 = 177 vs deeper heads
        LogComplex a = eval_product(small, z).value;
        LogComplex b = eval_product(large, z).value;
        CHECK(rel_diff(a.log_mag, b.log_mag) < 1e-11);
        CHECK(std::abs(wrap_phase(a.phase - b.phase)) < 1e-10);
    }
}

TEST_CASE("Lindelof Euler-Maclaurin path matches direct summation") {
    for (double rho : {0.75, 1.25}) {
        SeqPtr s = lindelof_zeros(rho);
        CanonicalProduct direct = make_product(s, 1e-10, 4'000'000);
        CanonicalProduct em = make_product(s, 1e-10, 20'000);
        double log_r = rho < 1.0 ? std::log(1e6) : std::log(1e4);
        for (double th : {0.0, 0.9, 2.6, -1.4}) {
            LogComplex z = lc_from_polar(log_r, th);
            ProductEval d = eval_product(direct, z);
            ProductEval e = eval_product(em, z);
            REQUIRE_FALSE(d.asymptotic);
            REQUIRE(e.asymptotic);
            CHECK(rel_diff(d.value.log_mag, e.value.log_mag) < 1e-7);
            CHECK(std::abs(wrap_phase(d.value.phase - e.value.phase)) < 1e-5);
        }
    }
}

TEST_CASE("Lindelof magnitude roughly follows pi r^rho / sin(pi rho) on the positive axis") {
    CanonicalProduct f = make_product(lindelof_zeros(0.75), 1e-9, 20'000);
    double log_r = std::log(1e8);
    ProductEval e = eval_magnitude(f, lc_from_polar(log_r, 0.0));
    double lead = kPi / std::sin(0.75 * kPi) * std::exp(0.75 * log_r);
    CHECK(rel_diff(e.value.log_mag, lead) < 1e-2);
}

TEST_CASE("truncation failure carries the partial value and achieved bound") {
    CanonicalProduct f = make_product(geometric_zeros(), 1e-10, 3);
    try {
        eval_product(f, lc_from(cd{100.0, 3.0}));
        FAIL("expected TruncationError");
    } catch (const TruncationError& e) {
        CHECK(e.achieved_bound() > 1e-10);
        CHECK(std::isfinite(e.partial().log_mag));
    }
}

TEST_CASE("halving trunc_tol moves the value by less than the previous tail bound") {
    for (const SeqPtr& s : {geometric_zeros(), bank_zeros()}) {
        CanonicalProduct loose = make_product(s, 1e-6);
        CanonicalProduct tight = make_product(s, 5e-7);
        LogComplex z = lc_from(cd{37.5, 12.0});
        ProductEval a = eval_product(loose, z);
        ProductEval b = eval_product(tight, z);
        CHECK(std::abs(a.value.log_mag - b.value.log_mag) <= a.err_bound + 1e-15);
    }
}

TEST_CASE("derivative at zero: single-zero closed form") {
    // f = 1 - z/a has f'(a) = -1/a
    CanonicalProduct f = make_product(explicit_zeros({{2.0, 0.0}}));
    LogComplex d = derivative_at_zero(f, 0);
    CHECK(d.log_mag == doctest::Approx(std::log(0.5)).epsilon(1e-14));
    CHECK(d.phase == doctest::Approx(kPi));
}

TEST_CASE("derivative at zero agrees with a central finite difference") {
    auto fd_check = [](const CanonicalProduct& f, std::size_t k, double tol) {
        cd zk = to_complex(f.zeros->point_lc(k));
        double gap = 1e300;
        if (k > 0) gap = std::min(gap, std::abs(zk - to_complex(f.zeros->point_lc(k - 1))));
        gap = std::min(gap, std::abs(zk - to_complex(f.zeros->point_lc(k + 1))));
        double h = 1e-6 * gap;
        cd up = to_complex(eval_product(f, lc_from(zk + h)).value);
        cd dn = to_complex(eval_product(f, lc_from(zk - h)).value);
        cd fd = (up - dn) / (2.0 * h);
        cd got = to_complex(derivative_at_zero(f, k));
        CHECK(std::abs(got - fd) <= tol * std::abs(fd));
    };
    CanonicalProduct L = make_product(lindelof_zeros(0.75), 1e-12);
    fd_check(L, 0, 1e-5);  // z_1 = -1
    for (std::size_t k : {3u, 10u, 17u}) fd_check(L, k, 1e-4);
    CanonicalProduct L15 = make_product(lindelof_zeros(1.5), 1e-12);
    for (std::size_t k : {1u, 6u, 12u}) fd_check(L15, k, 1e-4);
    CanonicalProduct G = make_product(geometric_zeros(), 1e-12);
    for (std::size_t k : {0u, 3u, 7u}) fd_check(G, k, 1e-4);
    CanonicalProduct AC = make_product(anderson_clunie_zeros(3.0, 3), 1e-12);
    for (std::size_t k : {0u, 2u, 9u}) fd_check(AC, k, 1e-4);
}

TEST_CASE("bank derivative keeps the q-example decay entirely in logs") {
    CanonicalProduct f = make_product(bank_zeros(), 1e-10);
    // k = 3 in 1-based terms (z_3 = 4, 0-based index 2): |z_k f'(z_k)| <=
    // (eps_2/2^2) exp(K |z_k|) for a fitted K
    LogComplex d = derivative_at_zero(f, 2);
    double lhs = std::log(4.0) + d.log_mag;
    double log_eps2 = -std::exp(4.0);
    CHECK(lhs <= log_eps2 + 2.0 * 4.0);
    CHECK(lhs >= log_eps2 - 10.0);  // and it is the eps that drives it
}

TEST_CASE("max modulus: AC attains its maximum on the positive axis") {
    CanonicalProduct f = make_product(anderson_clunie_zeros(3.0, 4));
    MaxModulus mm = max_modulus_on_circle(f, 2.0, 4096);
    CHECK(std::abs(mm.theta) < 1e-6);
    double on_axis = eval_magnitude(f, lc_from_polar(2.0, 0.0)).value.log_mag;
    CHECK(mm.log_max >= on_axis - 1e-12);
    CHECK_THROWS_AS(max_modulus_on_circle(f, 2.0, 48), std::domain_error);
}

TEST_CASE("max modulus: Lindelof zeros on the negative axis push the max to theta = 0") {
    CanonicalProduct f = make_product(lindelof_zeros(0.75), 1e-10);
    MaxModulus mm = max_modulus_on_circle(f, std::log(100.0), 512);
    CHECK(std::abs(mm.theta) < 1e-6);
}

TEST_CASE("Euler-Maclaurin derivative helpers match finite differences") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> ua(-2.4, 2.4), um(-1.0, 1.0);
    for (int it = 0; it < 40; ++it) {
        double beta = it % 2 == 0 ? 4.0 / 3.0 : -0.8;
        double x = 50.0 + 20.0 * um(rng);
        cd W = std::polar(std::exp(um(rng)) * std::pow(x, -beta), ua(rng));
        auto u = [&](double t) { return std::log(1.0 + W * std::pow(t, beta)); };
        cd d1, d3;
        products_detail::em_log_derivs(W * std::pow(x, beta), beta, x, d1, d3);
        double h = 0.05 * x;
        cd fd1 = (u(x + h) - u(x - h)) / (2.0 * h);
        cd fd1b = (u(x + h / 2) - u(x - h / 2)) / h;
        cd rich1 = (4.0 * fd1b - fd1) / 3.0;
        CHECK(std::abs(d1 - rich1) <= 2e-5 * std::abs(d1));
        auto fd3_at = [&](double hh) {
            return (-0.5 * u(x - 2 * hh) + u(x - hh) - u(x + hh) + 0.5 * u(x + 2 * hh)) /
                   (hh * hh * hh);
        };
        cd rich3 = (4.0 * fd3_at(h / 2) - fd3_at(h)) / 3.0;
        CHECK(std::abs(d3 - rich3) <= 2e-3 * std::max(std::abs(d3), std::abs(rich3)));
    }
}
