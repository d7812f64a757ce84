// Times the OpenMP kernels against their serial reference on the two hot
// loops (per-circle angle sums and quadrature-node maps) and verifies the
// results are bit-identical. Exits nonzero on any mismatch.

#include <chrono>
#include <cstdio>
#include <vector>

#include "nevlab/kernels.hpp"
#include "nevlab/logcomplex.hpp"
#include "nevlab/products.hpp"
#include "nevlab/sequences.hpp"

using namespace nevlab;

namespace {


template <class F>
double timed(const char* name, F&& f, double* out) {
    auto t0 = std::chrono::steady_clock::now();
    double v = f();
    std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
    std::printf("  %-34s %9.3f ms\n", name, dt.count() * 1e3);
    *out = v;
    return dt.count();
}

}  // namespace

int main() {
    int mismatches = 0;
    std::printf("kernel benchmark (threads: %d)\n", kernels::thread_count());

    {
        // per-circle angle sum: log|1 - w| over the fourth Anderson-Clunie circle
        SeqPtr seq = anderson_clunie_zeros(3.0, 4);
        const ACZeros* ac = as_ac(*seq);
        auto angles = ac->circle_angles(3);
        const double lm = 0.0, theta = 0.3;
        auto body = [&](std::size_t j) {
            return log_abs_one_minus({lm, wrap_phase(theta - angles[j])});
        };
        double vs = 0.0, vp = 0.0;
        std::printf("circle sum, %zu factors\n", angles.size());
        timed("serial reference", [&] { return kernels::block_sum_serial(angles.size(), body); },
              &vs);
        timed("OpenMP block_sum", [&] { return kernels::block_sum(angles.size(), body); }, &vp);
        if (vs != vp) {
            std::printf("  MISMATCH: %.17g vs %.17g\n", vs, vp);
            ++mismatches;
        }
    }
    {
        // quadrature map: magnitudes of the AC product on a theta grid
        CanonicalProduct f = make_product(anderson_clunie_zeros(3.0, 4));
        const std::size_t n = 64;
        std::vector<double> a(n), b(n);
        auto node = [&](std::size_t i) {
            double th = -kPi + 2.0 * kPi * (i + 0.5) / n;
            return eval_magnitude(f, lc_from_polar(324.0, th)).value.log_mag;
        };
        std::printf("theta map, %zu nodes at log r = 324\n", n);
        double dummy = 0.0;
        timed("serial map",
              [&] {
                  kernels::serial_map(n, a.data(), node);
                  return a[0];
              },
              &dummy);
        timed("parallel map",
              [&] {
                  kernels::parallel_map(n, b.data(), node);
                  return b[0];
              },
              &dummy);
        for (std::size_t i = 0; i < n; ++i)
            if (a[i] != b[i]) {
                std::printf("  MISMATCH at node %zu\n", i);
                ++mismatches;
                break;
            }
    }
    {
        // paired accumulation (log-magnitude and phase together)
        SeqPtr seq = anderson_clunie_zeros(3.0, 4);
        const ACZeros* ac = as_ac(*seq);
        auto angles = ac->circle_angles(3);
        auto body = [&](std::size_t j) {
            LogComplex one_minus = lc_one_minus({-0.4, wrap_phase(1.1 - angles[j])});
            return kernels::Sum2{one_minus.log_mag, one_minus.phase};
        };
        kernels::Sum2 s{}, p{};
        std::printf("paired circle sum, %zu factors\n", angles.size());
        double d0 = 0.0, d1 = 0.0;
        auto t0 = std::chrono::steady_clock::now();
        s = kernels::block_sum2_serial(angles.size(), body);
        d0 = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        t0 = std::chrono::steady_clock::now();
        p = kernels::block_sum2(angles.size(), body);
        d1 = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("  %-34s %9.3f ms\n", "serial reference", d0 * 1e3);
        std::printf("  %-34s %9.3f ms\n", "OpenMP block_sum2", d1 * 1e3);
        if (s.a != p.a || s.b != p.b) {
            std::printf("  MISMATCH\n");
            ++mismatches;
        }
    }
    std::printf(mismatches ? "FAILED: %d mismatches\n" : "all parallel results bit-identical\n",
                mismatches);
    return mismatches == 0 ? 0 : 1;
}
