#include "pcgen/kernels.hpp"

#include <atomic>
#include <cassert>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pcgen::kernels {

namespace {
std::atomic<bool> g_parallel{true};

bool use_par(size_t work) {
#ifdef _OPENMP
    return g_parallel.load(std::memory_order_relaxed) && work >= kParallelMinWork &&
           omp_get_max_threads() > 1;
#else
    (void)work;
    return false;
#endif
}
} // namespace

void set_parallel(bool on) { g_parallel.store(on, std::memory_order_relaxed); }
bool parallel_enabled() { return g_parallel.load(std::memory_order_relaxed); }

namespace serial {

void matvec(const Matrix& a, std::span<const double> x, std::span<double> y) {
    assert(static_cast<int>(x.size()) == a.cols && static_cast<int>(y.size()) == a.rows);
    for (int r = 0; r < a.rows; ++r) {
        const double* row = a.row(r);
        double acc = 0.0;
        for (int c = 0; c < a.cols; ++c) acc += row[c] * x[c];
        y[r] = acc;
    }
}

void outer(std::span<const double> u, std::span<const double> v, Matrix& out) {
    assert(static_cast<int>(u.size()) == out.rows && static_cast<int>(v.size()) == out.cols);
    for (int r = 0; r < out.rows; ++r) {
        double* row = out.row(r);
        const double ur = u[r];
        for (int c = 0; c < out.cols; ++c) row[c] = ur * v[c];
    }
}

void weight_axpby(Matrix& a, double eta, const Matrix& g, double decay) {
    assert(a.rows == g.rows && a.cols == g.cols);
    double* pa = a.data.data();
    const double* pg = g.data.data();
    const size_t n = a.size();
    for (size_t i = 0; i < n; ++i) pa[i] += eta * pg[i] - decay * pa[i];
}

} // namespace serial

namespace par {

void matvec(const Matrix& a, std::span<const double> x, std::span<double> y) {
    assert(static_cast<int>(x.size()) == a.cols && static_cast<int>(y.size()) == a.rows);
#pragma omp parallel for schedule(static)
    for (int r = 0; r < a.rows; ++r) {
        const double* row = a.row(r);
        double acc = 0.0;
        for (int c = 0; c < a.cols; ++c) acc += row[c] * x[c];
        y[r] = acc;
    }
}

void outer(std::span<const double> u, std::span<const double> v, Matrix& out) {
    assert(static_cast<int>(u.size()) == out.rows && static_cast<int>(v.size()) == out.cols);
#pragma omp parallel for schedule(static)
    for (int r = 0; r < out.rows; ++r) {
        double* row = out.row(r);
        const double ur = u[r];
        for (int c = 0; c < out.cols; ++c) row[c] = ur * v[c];
    }
}

void weight_axpby(Matrix& a, double eta, const Matrix& g, double decay) {
    assert(a.rows == g.rows && a.cols == g.cols);
    double* pa = a.data.data();
    const double* pg = g.data.data();
#pragma omp parallel for schedule(static)
    for (long i = 0; i < static_cast<long>(a.size()); ++i)
        pa[i] += eta * pg[i] - decay * pa[i];
}

} // namespace par

void matvec(const Matrix& a, std::span<const double> x, std::span<double> y) {
    if (use_par(a.size()))
        par::matvec(a, x, y);
    else
        serial::matvec(a, x, y);
}

void outer(std::span<const double> u, std::span<const double> v, Matrix& out) {
    if (use_par(out.size()))
        par::outer(u, v, out);
    else
        serial::outer(u, v, out);
}

void weight_axpby(Matrix& a, double eta, const Matrix& g, double decay) {
    if (use_par(a.size()))
        par::weight_axpby(a, eta, g, decay);
    else
        serial::weight_axpby(a, eta, g, decay);
}

} // namespace pcgen::kernels
