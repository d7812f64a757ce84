// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one pass/fail line per criterion. Usage:
//   acceptance [path-to-cli] [scratch-dir]
// The CLI path is needed for the determinism criterion; without it that
// criterion fails.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "nevlab/fixtures.hpp"
#include "nevlab/interpolation.hpp"
#include "nevlab/nevanlinna.hpp"
#include "nevlab/separation.hpp"

using namespace nevlab;
using cd = std::complex<double>;

namespace {

int g_failures = 0;

void report(int id, const char* name, bool pass, double seconds, const std::string& detail) {
    std::printf("[%2d/12] %s  %-28s (%7.1f s)  %s\n", id, pass ? "PASS" : "FAIL", name, seconds,
                detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

void run(int id, const char* name, double budget_s,
         const std::function<bool(std::string&)>& fn) {
    auto t0 = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
        ok = fn(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (budget_s > 0.0 && dt > budget_s) {
        ok = false;
        detail += " [over runtime target " + std::to_string(budget_s) + "s]";
    }
    report(id, name, ok, dt, detail);
}

std::string fnum(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

bool same_file_bytes(const std::string& a, const std::string& b) {
    std::ifstream fa(a, std::ios::binary), fb(b, std::ios::binary);
    if (!fa || !fb) return false;
    std::stringstream sa, sb;
    sa << fa.rdbuf();
    sb << fb.rdbuf();
    return sa.str() == sb.str() && !sa.str().empty();
}

// radii at the geometric means of consecutive Lindelof zero moduli
std::vector<double> lindelof_safe_radii(double rho, const std::vector<long>& ks) {
    std::vector<double> out;
    for (long k : ks)
        out.push_back(0.5 * (std::log(static_cast<double>(k)) +
                             std::log(static_cast<double>(k + 1))) /
                      rho);
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    std::string cli = argc > 1 ? argv[1] : "";
    std::string scratch = argc > 2 ? argv[2] : "acceptance_out";
    if (std::system(("mkdir -p " + scratch).c_str()) != 0) std::fprintf(stderr, "scratch dir setup failed\n");

    // 1. Lindelof deficiency: closed form and scan tail, rho in {0.75, 1.25}
    {
        struct Case {
            double rho, frozen;
        } cases[] = {{0.75, 0.2928932188134524}, {1.25, 0.5857864376269049}};
        for (int i = 0; i < 2; ++i) {
            double rho = cases[i].rho;
            run(1, (std::string("lindelof-deficiency-") + fnum(rho)).c_str(), 60.0,
                [&](std::string& d) {
                    double closed = delta_N_lindelof_closed_form(rho);
                    if (std::abs(closed - cases[i].frozen) > 1e-6) {
                        d = "closed form " + fnum(closed);
                        return false;
                    }
                    CanonicalProduct f = make_product(lindelof_zeros(rho), 1e-10, 100000);
                    std::vector<double> grid;
                    for (int j = 0; j < 5; ++j)
                        grid.push_back((4.0 + 2.0 * j) * std::log(10.0));  // 1e4 .. 1e12
                    DeficiencyScan scan = deficiency_scan(f, cd{0.0, 0.0}, grid, 256);
                    d = "closed=" + fnum(closed) + " dN=" + fnum(scan.delta_N_lower) +
                        " dV=" + fnum(scan.delta_V_lower) +
                        (scan.tail_monotone ? " monotone" : " non-monotone");
                    return std::abs(scan.delta_N_lower - closed) <= 0.05 &&
                           std::abs(scan.delta_V_lower - closed) <= 0.05 && scan.tail_monotone;
                });
        }
    }

    // 2. AC construction exactness at rho = 3
    run(2, "ac-exactness-rho3", 1.0, [&](std::string& d) {
        ACParameters P = ac_parameters(3.0, 4);
        SeqPtr seq = anderson_clunie_zeros(3.0, 4);
        bool ok = P.log_b[0] == 0.0 && P.log_b[1] == 1.0 && P.log_b[2] == 4.0 &&
                  P.log_b[3] == 324.0;
        ok = ok && P.mult[0].value == 1.0 && P.mult[1].value == 1.0 && P.mult[2].value == 16.0 &&
             P.mult[3].value == 104976.0;
        for (int i = 0; i < 4; ++i) ok = ok && P.mult[i].exact;
        double n3 = seq->count_below(4.0 + 1e-12);
        double N3 = seq->integrated_count(4.0);
        ok = ok && n3 == 18.0;
        ok = ok && N3 == 7.0 && N3 <= std::pow(4.0, 1.5);
        ok = ok && P.beta == 4.0 && P.mult[2].value == std::floor(std::pow(2.0, P.beta));
        d = "log_b=[0,1,4,324] c=[1,1,16,104976] n(b3)=" + fnum(n3) + " N(b3)=" + fnum(N3);
        return ok;
    });

    // 3. AC deficiency trend at rho = 3 with direct factor summation
    run(3, "ac-deficiency-trend", 600.0, [&](std::string& d) {
        CanonicalProduct f = make_product(anderson_clunie_zeros(3.0, 4));
        double logb[] = {1.0, 4.0, 324.0};  // b_2, b_3, b_4
        std::vector<double> ratio, T;
        for (double lr : logb) {
            CharacteristicSample s = characteristic_sample(f, lr, 256);
            T.push_back(s.T);
            ratio.push_back(s.N_zeros / s.T);
        }
        bool dec = ratio[0] > ratio[1] && ratio[1] > ratio[2];
        bool lower3 = T[1] >= (std::pow(4.0, 2.0) - 1.0) / 40.0;
        bool lower4 = T[2] >= (std::pow(324.0, 2.0) - 1.0) / 40.0;
        d = "N/T=" + fnum(ratio[0]) + "," + fnum(ratio[1]) + "," + fnum(ratio[2]) +
            " T(b3)=" + fnum(T[1]) + " T(b4)=" + fnum(T[2]);
        return dec && lower3 && lower4;
    });

    // 4. max-modulus symmetry for rho in {2.5, 3}
    run(4, "ac-maxmod-symmetry", 300.0, [&](std::string& d) {
        double worst = 0.0;
        // radii sit near populated circles: far between circles log|f| is a
        // monomial in |z| up to e^{-gap} and the argmax is a numerical tie
        {
            CanonicalProduct f = make_product(anderson_clunie_zeros(3.0, 4));
            for (double lr : {0.5, 2.5, 6.0, 322.0, 324.0}) {
                MaxModulus mm = max_modulus_on_circle(f, lr, 4096);
                worst = std::max(worst, std::abs(mm.theta));
            }
        }
        {
            CanonicalProduct f = make_product(anderson_clunie_zeros(2.5, 3));
            for (double lr : {0.5, 3.0, 12.0, 16.0, 18.0}) {
                MaxModulus mm = max_modulus_on_circle(f, lr, 4096);
                worst = std::max(worst, std::abs(mm.theta));
            }
        }
        d = "worst |theta*| = " + fnum(worst);
        return worst <= 1e-6;
    });

    // 5. sandwich bound, 100 random triples
    run(5, "poly-factor-sandwich", 60.0, [&](std::string& d) {
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
        d = "violations = " + std::to_string(violations);
        return violations == 0;
    });

    // 6. power-inequality oracles, 1e4 samples
    run(6, "power-inequality-oracle", 60.0, [&](std::string& d) {
        PowerInequalityResult r = check_power_inequalities(10000, 12345);
        d = std::to_string(r.checks) + " checks, " + std::to_string(r.violations) + " violations";
        return r.violations == 0;
    });

    // 7. Jensen identity at 10 radii each
    run(7, "jensen-identity", 300.0, [&](std::string& d) {
        double worst = 0.0;
        {
            CanonicalProduct f = make_product(lindelof_zeros(0.75), 1e-12);
            for (double lr : lindelof_safe_radii(
                     0.75, {6, 9, 12, 24, 48, 96, 144, 192, 288, 576}))
                worst = std::max(
                    worst,
                    std::abs(characteristic_sample(f, lr, 256, 1e-8, 1e-6, 1e-9).jensen_residual));
        }
        {
            CanonicalProduct f = make_product(lindelof_zeros(1.5), 1e-12);
            for (double lr :
                 lindelof_safe_radii(1.5, {4, 6, 9, 14, 21, 32, 48, 64, 81, 108}))
                worst = std::max(
                    worst,
                    std::abs(characteristic_sample(f, lr, 256, 1e-8, 1e-6, 1e-9).jensen_residual));
        }
        {
            CanonicalProduct f = make_product(anderson_clunie_zeros(3.0, 3), 1e-12);
            for (double lr : {0.5, 1.5, 2.2, 2.8, 3.3, 4.6, 5.4, 6.5, 7.6, 9.0})
                worst = std::max(
                    worst,
                    std::abs(characteristic_sample(f, lr, 256, 1e-8, 1e-6, 1e-9).jensen_residual));
        }
        d = "max |m - m0 - N| = " + fnum(worst);
        return worst <= 1e-6;
    });

    // 8. separation verdicts
    run(8, "separation-verdicts", 300.0, [&](std::string& d) {
        bool ok = true;
        // Lindelof with the refined weight: some swept C gives inf >= 1 on k in [2, 200]
        SeqPtr L = lindelof_zeros(0.75);
        auto C = witness_constant_search(L, WeightKind::lindelof_refined, 0.0, 200, 0.0, 2);
        ok = ok && C.has_value();
        std::string cs = C ? fnum(*C) : "none";
        if (C) {
            SeparationBasis basis = separation_basis(L, WeightKind::lindelof_refined, 0.0, 200);
            SeparationReport r = scan_with_constant(basis, WeightKind::lindelof_refined, 0.0, *C);
            double inf2 = 1e300;
            for (std::size_t k = 1; k < 200; ++k)
                if (!r.excluded[k]) inf2 = std::min(inf2, r.per_k[k]);
            ok = ok && inf2 >= 0.0;
        }
        // Bank: decaying for every (q, C) in the sweep, K = 12
        for (double q : {0.0, 1.0, 2.5}) {
            SeparationBasis basis = separation_basis(bank_zeros(), WeightKind::power, q, 12);
            for (int j = -10; j <= 40; j += 10) {
                SeparationReport r =
                    scan_with_constant(basis, WeightKind::power, q, std::ldexp(1.0, j));
                ok = ok && r.verdict == SeparationReport::Verdict::decaying;
            }
        }
        // AC with the log weight q = 2.5 over circles i <= 4
        SeparationReport rac = separation_scan(anderson_clunie_zeros(3.0, 4),
                                               WeightKind::log_power, 2.5, 1.0, 104994);
        ok = ok && rac.verdict == SeparationReport::Verdict::bounded_below;
        d = "lindelof C=" + cs + ", bank decaying, ac " + to_string(rac.verdict);
        return ok;
    });

    // 9. interpolation pipeline, Lindelof rho = 0.75, K = 40
    run(9, "interpolation-pipeline", 300.0, [&](std::string& d) {
        CanonicalProduct f = make_product(lindelof_zeros(0.75), 1e-12);
        InterpolationArtifacts art = build_coefficients(f, 40, 2.0, ExponentVariant::finite_order);
        double wi = 0.0, wn = 0.0;
        for (std::size_t k = 0; k < art.K; ++k) {
            wi = std::max(wi, art.interp_residual[k]);
            if (!art.dropped[k]) wn = std::max(wn, art.numerator_residual[k]);
        }
        Evaluator fe = [&f](const LogComplex& z) { return eval_product(f, z).value; };
        Evaluator A = [&art](const LogComplex& z) { return eval_A(art, z); };
        Evaluator B = [&art](const LogComplex& z) { return eval_B(art, z); };
        std::mt19937_64 rng(2024);
        std::uniform_real_distribution<double> ur(2.0, 60.0), ua(-2.8, 2.8);
        std::vector<LogComplex> pts;
        std::vector<double> radii;
        while (pts.size() < 20) {
            LogComplex z = lc_from(std::polar(ur(rng), ua(rng)));
            double dd = nearest_zero_log_dist(f.zeros, z);
            if (dd < std::log(0.1)) continue;
            pts.push_back(z);
            radii.push_back(dd + std::log(0.35));
        }
        CauchySettings cs;
        cs.start_nodes = 48;
        OdeResidualReport rep = ode_residual({B, A}, fe, pts, radii, cs);
        d = "interp=" + fnum(wi) + " numerator=" + fnum(wn) + " ode=" + fnum(rep.max_residual);
        return wi <= 1e-8 && wn <= 1e-8 && rep.max_residual <= 1e-6;
    });

    // 10. growth-order trend evidence (finite-range trends, evidence not proof)
    run(10, "growth-trend-evidence", 900.0, [&](std::string& d) {
        // Lindelof pipeline: usual order
        CanonicalProduct f = make_product(lindelof_zeros(0.75), 1e-12);
        InterpolationArtifacts art = build_coefficients(f, 40, 2.0, ExponentVariant::finite_order);
        std::vector<double> grid;
        for (double lg = 2.0; lg <= 5.01; lg += 0.5) grid.push_back(lg * std::log(10.0));
        MagFn gf = [&](double lr, double th) {
            return eval_magnitude(f, lc_from_polar(lr, th)).value.log_mag;
        };
        MagFn gA = [&](double lr, double th) { return eval_A(art, lc_from_polar(lr, th)).log_mag; };
        MagFn gB = [&](double lr, double th) { return eval_B(art, lc_from_polar(lr, th)).log_mag; };
        GrowthEstimate ef = order_estimate_fn(gf, grid, 256, 1024);
        GrowthEstimate ea = order_estimate_fn(gA, grid, 256, 1024);
        GrowthEstimate eb = order_estimate_fn(gB, grid, 64, 64);
        bool fin_ok = eb.slope <= ea.slope + 0.15 && ea.slope <= ef.slope + 0.15;

        // AC pipeline: logarithmic order
        CanonicalProduct g = make_product(anderson_clunie_zeros(3.0, 4), 1e-12);
        InterpolationArtifacts art2 = build_coefficients(g, 2, 2.0, ExponentVariant::log_order);
        std::vector<double> lgrid{2.5, 36.0, 160.0, 300.0};
        MagFn hf = [&](double lr, double th) {
            return eval_magnitude(g, lc_from_polar(lr, th)).value.log_mag;
        };
        MagFn hA = [&](double lr, double th) { return eval_A(art2, lc_from_polar(lr, th)).log_mag; };
        MagFn hB = [&](double lr, double th) { return eval_B(art2, lc_from_polar(lr, th)).log_mag; };
        GrowthEstimate lf = log_order_estimate_fn(hf, lgrid, 256, 512);
        GrowthEstimate la = log_order_estimate_fn(hA, lgrid, 256, 512);
        GrowthEstimate lb = log_order_estimate_fn(hB, lgrid, 64, 64);
        bool log_ok = lb.slope <= la.slope + 0.3 && la.slope <= lf.slope + 0.3;

        d = "order f/A/B = " + fnum(ef.slope) + "/" + fnum(ea.slope) + "/" + fnum(eb.slope) +
            "; log-order f/A/B = " + fnum(lf.slope) + "/" + fnum(la.slope) + "/" +
            fnum(lb.slope) + " [evidence, not proof]";
        return fin_ok && log_ok;
    });

    // 11. fixture residuals
    run(11, "fixture-residuals", 120.0, [&](std::string& d) {
        auto wex = fixtures::run_fixture(fixtures::w_example(), 20, 7);
        auto exe = fixtures::run_fixture(fixtures::example_equation(), 20, 11);
        auto f4 = fixtures::run_fixture(fixtures::fourth_order(), 10, 13);
        d = "w=" + fnum(wex.max_residual) + " p2=" + fnum(exe.max_residual) +
            " f4=" + fnum(f4.max_residual);
        return wex.max_residual <= 1e-10 && exe.max_residual <= 1e-10 &&
               f4.max_residual <= 1e-8;
    });

    // 12. determinism across thread counts for every CLI command
    run(12, "cli-determinism", 1200.0, [&](std::string& d) {
        if (cli.empty()) {
            d = "no CLI path given";
            return false;
        }
        struct Cmd {
            const char* tag;
            std::string args;
            bool extra_maxmod;
        };
        std::vector<Cmd> cmds = {
            {"lindelof", "lindelof --rho 0.75 --grid 1e3:1e6:4 --ntheta 64", false},
            {"acprod", "acprod --rho 3 --n-max 3 --check both --ntheta 512 --radii 0.5 2.5",
             true},
            {"characteristic", "characteristic --kind geometric --grid 10:1000:3 --ntheta 64",
             false},
            {"deficiency", "deficiency --kind lindelof --rho 0.75 --grid 1e2:1e5:4 --ntheta 64",
             false},
            {"separation", "separation --kind bank --K 12 --weight power --sep-q 1 --C 1", false},
            {"interpolate", "interpolate --kind lindelof --rho 0.75 --K 8 --probes 4 --seed 5",
             false},
            {"residual", "residual --fixture w-example --points 5 --seed 9", false},
            {"oracle", "oracle --samples 2000 --seed 3", false},
        };
        for (const auto& c : cmds) {
            std::string p1 = scratch + "/" + c.tag + "_t1";
            std::string p4 = scratch + "/" + c.tag + "_t4";
            std::string run1 = "NEVLAB_THREADS=1 " + cli + " --out " + p1 + " " + c.args +
                               " > /dev/null 2>&1";
            std::string run4 = "NEVLAB_THREADS=4 " + cli + " --out " + p4 + " " + c.args +
                               " > /dev/null 2>&1";
            int rc1 = std::system(run1.c_str());
            int rc4 = std::system(run4.c_str());
            if (rc1 != 0 || rc4 != 0) {
                d = std::string(c.tag) + ": nonzero exit";
                return false;
            }
            if (!same_file_bytes(p1 + ".csv", p4 + ".csv") ||
                !same_file_bytes(p1 + ".json", p4 + ".json")) {
                d = std::string(c.tag) + ": outputs differ across thread counts";
                return false;
            }
            if (c.extra_maxmod && !same_file_bytes(p1 + "_maxmod.csv", p4 + "_maxmod.csv")) {
                d = std::string(c.tag) + ": maxmod table differs";
                return false;
            }
        }
        d = std::to_string(cmds.size()) + " commands byte-identical with 1 and 4 threads";
        return true;
    });

    std::printf("%s: %d/12 criteria passed\n", g_failures == 0 ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL",
                12 - g_failures);
    return g_failures;
}
