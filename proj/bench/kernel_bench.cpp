// Times the serial reference kernels against the OpenMP versions at the
// shapes the simulator actually runs, plus a full settle at MNIST scale.
#include <chrono>
#include <cstdio>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "pcgen/kernels.hpp"
#include "pcgen/learning.hpp"
#include "pcgen/network.hpp"
#include "pcgen/rng.hpp"

using namespace pcgen;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

template <typename F>
double time_loop(F&& fn, int iters) {
    fn(); // warm up
    const auto t0 = Clock::now();
    for (int i = 0; i < iters; ++i) fn();
    return seconds_since(t0) / iters;
}

void bench_matvec(int rows, int cols, int iters) {
    Matrix a(rows, cols);
    Vec x(cols), y(rows);
    Rng rng(7);
    for (auto& v : a.data) v = rng.uniform(-1, 1);
    for (auto& v : x) v = rng.uniform(-1, 1);

    const double ts = time_loop([&] { kernels::serial::matvec(a, x, y); }, iters);
    const double tp = time_loop([&] { kernels::par::matvec(a, x, y); }, iters);
    std::printf("matvec       %5dx%-5d  serial %8.2f us   omp %8.2f us   speedup %.2fx\n",
                rows, cols, ts * 1e6, tp * 1e6, ts / tp);
}

void bench_weight_axpby(int rows, int cols, int iters) {
    Matrix a(rows, cols), g(rows, cols);
    Rng rng(11);
    for (auto& v : a.data) v = rng.uniform(-1, 1);
    for (auto& v : g.data) v = rng.uniform(-1, 1);

    const double ts = time_loop([&] { kernels::serial::weight_axpby(a, 1e-6, g, 1e-9); }, iters);
    const double tp = time_loop([&] { kernels::par::weight_axpby(a, 1e-6, g, 1e-9); }, iters);
    std::printf("weight_axpby %5dx%-5d  serial %8.2f us   omp %8.2f us   speedup %.2fx\n",
                rows, cols, ts * 1e6, tp * 1e6, ts / tp);
}

void bench_settle(bool parallel) {
    kernels::set_parallel(parallel);
    PCNetwork net = make_network({{784, Activation::Tanh},
                                  {100, Activation::Tanh},
                                  {100, Activation::Tanh},
                                  {10, Activation::Tanh}},
                                 3);
    Rng rng(5);
    Vec x(784), y(10, 0.0);
    for (auto& v : x) v = rng.uniform(-1, 1);
    y[3] = 1.0;
    ModeConfig cfg;
    cfg.beta = 0.0;
    cfg.tol = 0.0; // force the full 250-step budget for a stable comparison

    feedforward_init(net, x);
    const auto t0 = Clock::now();
    settle(net, x, y, cfg);
    const double t = seconds_since(t0);
    std::printf("settle 784-100-100-10 (250 steps)  %-6s  %8.2f ms\n",
                parallel ? "omp" : "serial", t * 1e3);
}

} // namespace

int main() {
#ifdef _OPENMP
    std::printf("OpenMP max threads: %d\n\n", omp_get_max_threads());
#else
    std::printf("built without OpenMP; both columns run the serial path\n\n");
#endif
    bench_matvec(100, 784, 2000);
    bench_matvec(784, 100, 2000);
    bench_matvec(600, 784, 1000);
    bench_matvec(10, 100, 5000);
    std::printf("\n");
    bench_weight_axpby(100, 784, 2000);
    bench_weight_axpby(600, 600, 1000);
    std::printf("\n");
    bench_settle(false);
    bench_settle(true);
    kernels::set_parallel(true);
    return 0;
}
