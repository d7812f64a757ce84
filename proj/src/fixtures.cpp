#include "nevlab/fixtures.hpp"

#include <cmath>
#include <random>

namespace nevlab::fixtures {

namespace {

using cd = std::complex<double>;

cd as_c(const LogComplex& z) { return to_complex(z); }

Evaluator poly([[maybe_unused]] const char* tag, std::function<cd(cd)> p) {
    return [p](const LogComplex& z) { return lc_from(p(as_c(z))); };
}

Evaluator exp_of(std::function<cd(cd)> e) {
    return [e](const LogComplex& z) { return lc_exp_of(e(as_c(z))); };
}

double never_zero(cd) { return 1e9; }

}  // namespace

Fixture w_example() {
    Fixture fx;
    fx.name = "w-example";
    fx.f = exp_of([](cd z) { return z; });
    fx.coeffs = {
        poly("-(1+sin z)", [](cd z) { return -(1.0 + std::sin(z)); }),
        poly("sin z", [](cd z) { return std::sin(z); }),
    };
    fx.box_radius = 5.0;
    fx.tolerance = 1e-10;
    fx.zero_dist = never_zero;
    return fx;
}

Fixture example_equation() {
    Fixture fx;
    fx.name = "example-equation";
    fx.f = [](const LogComplex& z) {
        cd zc = as_c(z);
        return lc_mul(lc_exp_of(0.5 * zc * zc), lc_from(std::sin(zc)));
    };
    fx.coeffs = {
        poly("z^2", [](cd z) { return z * z; }),
        poly("-2z", [](cd z) { return -2.0 * z; }),
    };
    fx.box_radius = 5.0;
    fx.tolerance = 1e-10;
    fx.zero_dist = [](cd z) {  // zeros of sin at k pi
        double k = std::round(z.real() / kPi);
        double best = 1e9;
        for (double t = k - 1; t <= k + 1; t += 1.0) best = std::min(best, std::abs(z - cd(t * kPi, 0.0)));
        return best;
    };
    return fx;
}

Fixture fourth_order() {
    Fixture fx;
    fx.name = "fourth-order";
    fx.f = [](const LogComplex& z) {
        cd zc = as_c(z);
        return lc_add(lc_exp_of(zc * zc), lc_exp_of(zc));
    };
    fx.coeffs = {
        poly("16z^4+8z^3+12z^2+4z+14",
             [](cd z) { return (16.0 * z + 8.0) * z * z * z + 12.0 * z * z + 4.0 * z + 14.0; }),
        poly("-(16z^4+16z^3+12z^2+4z+2)",
             [](cd z) { return -(((16.0 * z + 16.0) * z + 12.0) * z * z + 4.0 * z + 2.0); }),
        poly("8z^3-13", [](cd z) { return 8.0 * z * z * z - 13.0; }),
        [](const LogComplex&) { return lc_zero(); },
    };
    fx.box_radius = 3.0;
    fx.tolerance = 1e-8;
    // zeros of exp(z^2)+e^z satisfy z^2 - z = i pi (2k+1); keep a fixed margin
    fx.zero_dist = [](cd z) {
        cd w = z * z - z;
        double k = std::round((w.imag() / kPi - 1.0) / 2.0);
        double best = 1e9;
        for (double t = k - 1; t <= k + 1; t += 1.0)
            best = std::min(best, std::abs(w - cd(0.0, kPi * (2.0 * t + 1.0))));
        // map the w-distance back conservatively: |dw/dz| = |2z-1|
        double scale = std::max(0.5, std::abs(2.0 * z - 1.0));
        return best / scale;
    };
    return fx;
}

Fixture any_c(std::complex<double> c) {
    Fixture fx;
    fx.name = "any-c";
    fx.f = [c](const LogComplex& z) {
        return lc_add(lc_exp_of(as_c(z)), lc_from(c));
    };
    fx.coeffs = {
        poly("-1", [](cd) { return cd{-1.0, 0.0}; }),
        poly("-sin z", [](cd z) { return -std::sin(z); }),
        poly("sin z", [](cd z) { return std::sin(z); }),
        [c](const LogComplex& z) { return lc_mul(lc_from(c), lc_exp_of(-as_c(z))); },
    };
    fx.box_radius = 4.0;
    fx.tolerance = 1e-8;
    fx.zero_dist = [c](cd z) {  // zeros of e^z + c at log(-c) + 2 pi i k
        cd base = std::log(-c);
        double k = std::round((z.imag() - base.imag()) / (2.0 * kPi));
        double best = 1e9;
        for (double t = k - 1; t <= k + 1; t += 1.0)
            best = std::min(best, std::abs(z - (base + cd(0.0, 2.0 * kPi * t))));
        return best;
    };
    return fx;
}

Fixture by_name(const std::string& name) {
    if (name == "w-example") return w_example();
    if (name == "example-equation") return example_equation();
    if (name == "fourth-order") return fourth_order();
    if (name == "any-c") return any_c({2.0, 1.0});
    throw std::invalid_argument("unknown fixture: " + name);
}

std::vector<LogComplex> sample_points(const Fixture& fx, std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ur(0.05, 1.0), ua(-kPi, kPi);
    std::vector<LogComplex> pts;
    while (pts.size() < n) {
        cd z = std::polar(fx.box_radius * std::sqrt(ur(rng)), ua(rng));
        if (fx.zero_dist(z) < 0.2) continue;
        pts.push_back(lc_from(z));
    }
    return pts;
}

OdeResidualReport run_fixture(const Fixture& fx, std::size_t n_points, std::uint64_t seed) {
    std::vector<LogComplex> pts = sample_points(fx, n_points, seed);
    std::vector<double> radii;
    radii.reserve(pts.size());
    for (const auto& z : pts) {
        double d = fx.zero_dist(to_complex(z));
        radii.push_back(std::log(std::min(0.5, 0.45 * d)));
    }
    return ode_residual(fx.coeffs, fx.f, pts, radii);
}

}  // namespace nevlab::fixtures
