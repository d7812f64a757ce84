#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <vector>

#include "nevlab/kernels.hpp"

using namespace nevlab;

namespace {
struct ThreadEnv {
    explicit ThreadEnv(const char* v) { setenv("NEVLAB_THREADS", v, 1); }
    ~ThreadEnv() { unsetenv("NEVLAB_THREADS"); }
};
}  // namespace

TEST_CASE("thread count honors NEVLAB_THREADS") {
    {
        ThreadEnv e("3");
        CHECK(kernels::thread_count() == 3);
    }
    CHECK(kernels::thread_count() >= 1);
}

TEST_CASE("pairwise sum is accurate") {
    std::vector<double> v(100001);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::sin(0.001 * static_cast<double>(i));
    double p = kernels::pairwise_sum(v);
    long double ref = 0.0L;
    for (double x : v) ref += static_cast<long double>(x);
    CHECK(p == doctest::Approx(static_cast<double>(ref)).epsilon(1e-14));
}

TEST_CASE("block_sum equals the serial reference bitwise across thread counts") {
    auto f = [](std::size_t i) {
        double x = 1.0 + static_cast<double>(i % 9973);
        return std::log1p(1.0 / x) * std::cos(0.1 * static_cast<double>(i % 1000));
    };
    const std::size_t n = 300001;
    double serial = kernels::block_sum_serial(n, f);
    {
        ThreadEnv e("1");
        CHECK(kernels::block_sum(n, f) == serial);
    }
    {
        ThreadEnv e("4");
        CHECK(kernels::block_sum(n, f) == serial);
    }
    {
        ThreadEnv e("7");
        CHECK(kernels::block_sum(n, f) == serial);
    }
}

TEST_CASE("block_sum2 equals the serial reference bitwise across thread counts") {
    auto f = [](std::size_t i) {
        double x = static_cast<double>(i + 1);
        return kernels::Sum2{std::log(x) / x, std::sin(x)};
    };
    const std::size_t n = 123457;
    kernels::Sum2 serial = kernels::block_sum2_serial(n, f);
    {
        ThreadEnv e("4");
        kernels::Sum2 p = kernels::block_sum2(n, f);
        CHECK(p.a == serial.a);
        CHECK(p.b == serial.b);
    }
}

TEST_CASE("parallel map fills every slot") {
    const std::size_t n = 50000;
    std::vector<double> out(n, -1.0);
    ThreadEnv e("4");
    kernels::parallel_map(n, out.data(), [](std::size_t i) { return std::sqrt(double(i)); });
    for (std::size_t i = 0; i < n; i += 997)
        CHECK(out[i] == std::sqrt(static_cast<double>(i)));
}
