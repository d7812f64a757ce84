#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "nevlab/separation.hpp"

using namespace nevlab;
using Verdict = SeparationReport::Verdict;

TEST_CASE("pure geometric sequence is uniformly 0-separated") {
    auto C = witness_constant_search(geometric_zeros(), WeightKind::power, 0.0, 40);
    REQUIRE(C.has_value());
    CHECK(*C <= 1024.0);
    SeparationReport r = separation_scan(geometric_zeros(), WeightKind::power, 0.0, *C, 40);
    CHECK(r.verdict == Verdict::bounded_below);
    CHECK(r.inf_log >= std::log(0.5) - 1e-12);
}

TEST_CASE("single-zero list accepts the smallest swept constant") {
    SeqPtr s = explicit_zeros({{-1.0, 0.0}});
    auto C = witness_constant_search(s, WeightKind::power, 1.0, 1);
    REQUIRE(C.has_value());
    CHECK(*C == std::ldexp(1.0, -10));
}

TEST_CASE("bank sequence decays for every weight and constant in the sweep") {
    SeqPtr b = bank_zeros();
    for (double q : {0.0, 1.0, 3.0}) {
        SeparationBasis basis = separation_basis(b, WeightKind::power, q, 12);
        for (int j : {-10, 0, 20, 40}) {
            SeparationReport r = scan_with_constant(basis, WeightKind::power, q, std::ldexp(1.0, j));
            CHECK(r.verdict == Verdict::decaying);
        }
    }
    CHECK_FALSE(witness_constant_search(b, WeightKind::power, 2.0, 12).has_value());
}

TEST_CASE("bank per-k entries decay like -exp(2^n) at odd k") {
    SeparationReport r = separation_scan(bank_zeros(), WeightKind::power, 0.0, 1.0, 12);
    // 1-based k = 2n-1 -> index 2n-2; entries near -e^{2^n}
    CHECK(r.per_k[4] == doctest::Approx(-std::exp(8.0)).epsilon(0.15));   // n = 3
    CHECK(r.per_k[8] == doctest::Approx(-std::exp(32.0)).epsilon(0.05));  // n = 5
    CHECK(r.inf_log < -1e13);
}

TEST_CASE("Lindelof refined weight admits a witness with inf >= 1 beyond k = 1") {
    SeqPtr L = lindelof_zeros(0.75);
    auto C = witness_constant_search(L, WeightKind::lindelof_refined, 0.0, 60, 0.0, 2);
    REQUIRE(C.has_value());
    CHECK(*C <= 1024.0);
    SeparationBasis basis = separation_basis(L, WeightKind::lindelof_refined, 0.0, 60);
    SeparationReport r = scan_with_constant(basis, WeightKind::lindelof_refined, 0.0, *C);
    double inf2 = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k < 60; ++k)
        if (!r.excluded[k]) inf2 = std::min(inf2, r.per_k[k]);
    CHECK(inf2 >= 0.0);
    CHECK(r.verdict == Verdict::bounded_below);
    CHECK_THROWS_AS(separation_basis(bank_zeros(), WeightKind::lindelof_refined, 0.0, 12),
                    std::domain_error);
}

TEST_CASE("Lindelof power weight with q > rho is bounded below") {
    SeqPtr L = lindelof_zeros(0.75);
    auto C = witness_constant_search(L, WeightKind::power, 1.0, 100);
    REQUIRE(C.has_value());
    SeparationReport r = separation_scan(L, WeightKind::power, 1.0, *C, 100);
    CHECK(r.verdict == Verdict::bounded_below);
}

TEST_CASE("AC sequence with the log weight q = 2.5 over four circles") {
    SeqPtr ac = anderson_clunie_zeros(3.0, 4);
    SeparationReport r = separation_scan(ac, WeightKind::log_power, 2.5, 1.0, 104994);
    CHECK(r.K == 104994);
    CHECK(r.verdict == Verdict::bounded_below);
    CHECK(std::isfinite(r.inf_log));
}

TEST_CASE("AC fast-path basis equals the direct cofactor route") {
    SeqPtr ac = anderson_clunie_zeros(3.0, 3);
    CanonicalProduct f = make_product(ac);
    SeparationBasis basis = separation_basis(ac, WeightKind::log_power, 1.0, 18);
    for (std::size_t k : {0u, 1u, 2u, 9u, 17u}) {
        double direct = log_cofactor_magnitude(f, k);  // genus 0: log(|z_k||f'|)
        CHECK(basis.base[k] == doctest::Approx(direct).epsilon(1e-9));
    }
}

TEST_CASE("AC decomposition: identity, conventions, chord formula, P3 bound") {
    SeqPtr ac = anderson_clunie_zeros(3.0, 4);
    CanonicalProduct f = make_product(ac);
    const ACZeros* a = as_ac(*ac);
    REQUIRE(a);

    // P3(2) = 1 by convention (single point on circle 2)
    ACDecomposition d2 = ac_separation_decomposition(ac, 2, 0);
    CHECK(d2.log_p3 == 0.0);

    // decomposition identity against the cofactor product from the
    // derivative (different summation order), on circles 3 and 4
    auto check_identity = [&](std::size_t circle, std::size_t j) {
        ACDecomposition d = ac_separation_decomposition(ac, circle, j);
        std::size_t k = a->circle_first_index(circle - 1) + j;
        double direct = log_cofactor_magnitude(f, k);
        CHECK(std::abs(d.log_p1 + d.log_p2 + d.log_p3 - direct) <= 1e-9 *
              std::max(1.0, std::abs(direct)));
    };
    for (std::size_t j : {0u, 7u, 15u}) check_identity(3, j);
    check_identity(4, 0);
    check_identity(4, 52488);

    // same-circle chord: min distance is 2 b_i sin(pi/(4(c_i-1)))
    std::size_t first3 = a->circle_first_index(2);
    double min_chord = std::numeric_limits<double>::infinity();
    for (std::size_t t = 1; t < 16; ++t)
        min_chord = std::min(min_chord,
                             std::abs(to_complex(ac->point_lc(first3)) -
                                      to_complex(ac->point_lc(first3 + t))));
    double expect = 2.0 * std::exp(4.0) * std::sin(kPi / (4.0 * 15.0));
    CHECK(min_chord == doctest::Approx(expect).epsilon(1e-12));

    // log P3 >= -c_i log c_i on circle 3 (c_3 = 16)
    for (std::size_t j : {0u, 5u, 8u, 15u}) {
        ACDecomposition d = ac_separation_decomposition(ac, 3, j);
        CHECK(d.log_p3 >= -16.0 * std::log(16.0) - 1e-12);
    }
}

TEST_CASE("monotone weight dominance for |z_k| >= e") {
    SeqPtr g = geometric_zeros();
    SeparationReport r1 = separation_scan(g, WeightKind::power, 1.0, 2.0, 30);
    SeparationReport r2 = separation_scan(g, WeightKind::power, 2.0, 2.0, 30);
    for (std::size_t k = 1; k < 30; ++k) {  // |z_k| = 2^{k+1} >= e from k = 1
        CHECK(r2.per_k[k] >= r1.per_k[k] - 1e-12);
    }
}

TEST_CASE("scan validation") {
    CHECK_THROWS_AS(separation_scan(geometric_zeros(), WeightKind::power, 1.0, 1.0, 5),
                    std::domain_error);
    CHECK_THROWS_AS(separation_scan(geometric_zeros(), WeightKind::power, 1.0, 0.0, 20),
                    std::domain_error);
    CHECK_THROWS_AS(separation_scan(geometric_zeros(), WeightKind::power, -1.0, 1.0, 20),
                    std::domain_error);
}
