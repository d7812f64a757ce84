#ifndef NEVLAB_FIXTURES_HPP
#define NEVLAB_FIXTURES_HPP

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "nevlab/interpolation.hpp"

namespace nevlab::fixtures {

// A linear ODE with a known elementary solution, used as a residual check
// for the Cauchy-derivative machinery. coeffs[j] multiplies f^{(j)}.
struct Fixture {
    std::string name;
    std::vector<Evaluator> coeffs;
    Evaluator f;
    double box_radius = 5.0;   // sample |z| <= box_radius
    double tolerance = 1e-10;  // expected residual ceiling
    // distance from z to the nearest zero of f (to place quadrature circles)
    std::function<double(std::complex<double>)> zero_dist;
};

// f = e^z solves f'' + w f' - (1 + w) f = 0 for any entire w; here w = sin z.
Fixture w_example();
// f = exp(z^2/2) sin z solves f'' - 2z f' + z^2 f = 0.
Fixture example_equation();
// f = exp(z^2) + e^z solves the fourth-order equation
// f'''' + (8z^3-13) f'' - (16z^4+16z^3+12z^2+4z+2) f' + (16z^4+8z^3+12z^2+4z+14) f = 0.
Fixture fourth_order();
// f = e^z + c solves f'''' + c e^{-z} f''' + w f'' - w f' - f = 0 for any entire w.
Fixture any_c(std::complex<double> c);

Fixture by_name(const std::string& name);

// Deterministic sample points in |z| <= box, at least 0.2 away from zeros of f.
std::vector<LogComplex> sample_points(const Fixture& fx, std::size_t n, std::uint64_t seed);

// Residual run with per-point radii of half the zero distance (capped at 1/2).
OdeResidualReport run_fixture(const Fixture& fx, std::size_t n_points, std::uint64_t seed);

}  // namespace nevlab::fixtures

#endif
