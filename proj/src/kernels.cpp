#include "nevlab/kernels.hpp"

#include <algorithm>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace nevlab::kernels {

int thread_count() {
    if (const char* s = std::getenv("NEVLAB_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(s, &end, 10);
        if (end != s && v > 0) return static_cast<int>(std::min(v, 1024L));
    }
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

namespace {

double pairwise_range(const double* v, std::size_t n) {
    if (n <= 32) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += v[i];
        return s;
    }
    std::size_t h = n / 2;
    return pairwise_range(v, h) + pairwise_range(v + h, n - h);
}

Sum2 pairwise2_range(const Sum2* v, std::size_t n) {
    if (n <= 32) {
        Sum2 s;
        for (std::size_t i = 0; i < n; ++i) {
            s.a += v[i].a;
            s.b += v[i].b;
        }
        return s;
    }
    std::size_t h = n / 2;
    Sum2 x = pairwise2_range(v, h);
    Sum2 y = pairwise2_range(v + h, n - h);
    return {x.a + y.a, x.b + y.b};
}

}  // namespace

double pairwise_sum(std::span<const double> v) { return pairwise_range(v.data(), v.size()); }

Sum2 pairwise_sum2(std::span<const Sum2> v) { return pairwise2_range(v.data(), v.size()); }

}  // namespace nevlab::kernels
