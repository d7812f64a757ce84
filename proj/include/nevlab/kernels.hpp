#ifndef NEVLAB_KERNELS_HPP
#define NEVLAB_KERNELS_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace nevlab::kernels {

// Worker count: NEVLAB_THREADS if set (clamped to [1, 1024]), else the
// OpenMP default. Values above the hardware count just oversubscribe.
int thread_count();

// Fixed-order pairwise sum. The reduction tree depends only on v.size(),
// never on the thread count, so results are bit-stable.
double pairwise_sum(std::span<const double> v);

struct Sum2 {
    double a = 0.0;
    double b = 0.0;
};

Sum2 pairwise_sum2(std::span<const Sum2> v);

inline constexpr std::size_t kBlock = 2048;

namespace detail {
inline std::size_t block_count(std::size_t n) { return (n + kBlock - 1) / kBlock; }
}

// sum_{i in [0,n)} f(i). Each fixed block of kBlock indices is accumulated
// serially in index order; block partials are combined by pairwise_sum.
// Identical results whether run on 1 or N threads.
template <class F>
double block_sum_serial(std::size_t n, F&& f) {
    if (n == 0) return 0.0;
    const std::size_t nb = detail::block_count(n);
    std::vector<double> partial(nb);
    for (std::size_t b = 0; b < nb; ++b) {
        const std::size_t lo = b * kBlock;
        const std::size_t hi = lo + kBlock < n ? lo + kBlock : n;
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += f(i);
        partial[b] = s;
    }
    return pairwise_sum(partial);
}

template <class F>
double block_sum(std::size_t n, F&& f) {
    if (n == 0) return 0.0;
    const std::size_t nb = detail::block_count(n);
    std::vector<double> partial(nb);
    const int nt = thread_count();
#pragma omp parallel for schedule(static) num_threads(nt)
    for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(nb); ++b) {
        const std::size_t lo = static_cast<std::size_t>(b) * kBlock;
        const std::size_t hi = lo + kBlock < n ? lo + kBlock : n;
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += f(i);
        partial[static_cast<std::size_t>(b)] = s;
    }
    return pairwise_sum(partial);
}

// Paired variant for (log-magnitude, phase) accumulations. f(i) returns Sum2.
template <class F>
Sum2 block_sum2_serial(std::size_t n, F&& f) {
    if (n == 0) return {};
    const std::size_t nb = detail::block_count(n);
    std::vector<Sum2> partial(nb);
    for (std::size_t b = 0; b < nb; ++b) {
        const std::size_t lo = b * kBlock;
        const std::size_t hi = lo + kBlock < n ? lo + kBlock : n;
        Sum2 s;
        for (std::size_t i = lo; i < hi; ++i) {
            Sum2 t = f(i);
            s.a += t.a;
            s.b += t.b;
        }
        partial[b] = s;
    }
    return pairwise_sum2(partial);
}

template <class F>
Sum2 block_sum2(std::size_t n, F&& f) {
    if (n == 0) return {};
    const std::size_t nb = detail::block_count(n);
    std::vector<Sum2> partial(nb);
    const int nt = thread_count();
#pragma omp parallel for schedule(static) num_threads(nt)
    for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(nb); ++b) {
        const std::size_t lo = static_cast<std::size_t>(b) * kBlock;
        const std::size_t hi = lo + kBlock < n ? lo + kBlock : n;
        Sum2 s;
        for (std::size_t i = lo; i < hi; ++i) {
            Sum2 t = f(i);
            s.a += t.a;
            s.b += t.b;
        }
        partial[static_cast<std::size_t>(b)] = s;
    }
    return pairwise_sum2(partial);
}

// out[i] = f(i), independent work items.
template <class F>
void parallel_map(std::size_t n, double* out, F&& f) {
    const int nt = thread_count();
#pragma omp parallel for schedule(static) num_threads(nt)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i)
        out[static_cast<std::size_t>(i)] = f(static_cast<std::size_t>(i));
}

template <class F>
void serial_map(std::size_t n, double* out, F&& f) {
    for (std::size_t i = 0; i < n; ++i) out[i] = f(i);
}

// Runs f(i) for each i; f must handle its own output slot and exceptions.
template <class F>
void parallel_for(std::size_t n, F&& f) {
    const int nt = thread_count();
#pragma omp parallel for schedule(dynamic, 1) num_threads(nt)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i)
        f(static_cast<std::size_t>(i));
}

}  // namespace nevlab::kernels

#endif
