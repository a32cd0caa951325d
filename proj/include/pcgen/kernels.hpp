#pragma once

#include <span>

#include "pcgen/matrix.hpp"

// Dense kernels behind the simulator's inner loops. Each kernel exists twice:
// a serial reference in kernels::serial and an OpenMP version in
// kernels::par. The parallel versions split work by output element, so each
// element is still reduced sequentially by one thread and the results are
// bitwise identical to the serial path. The dispatching wrappers pick the
// OpenMP path for matrices above a size threshold when parallelism is
// enabled; pcgen-bench compares the two.

namespace pcgen::kernels {

// Process-wide switch (default on). Small problems fall back to serial
// regardless, so toy-scale runs do not pay thread overhead.
void set_parallel(bool on);
bool parallel_enabled();

inline constexpr size_t kParallelMinWork = 1u << 14;

namespace serial {
// y = A x
void matvec(const Matrix& a, std::span<const double> x, std::span<double> y);
// out = u v^T
void outer(std::span<const double> u, std::span<const double> v, Matrix& out);
// a = a + eta*g - decay*a, elementwise
void weight_axpby(Matrix& a, double eta, const Matrix& g, double decay);
} // namespace serial

namespace par {
void matvec(const Matrix& a, std::span<const double> x, std::span<double> y);
void outer(std::span<const double> u, std::span<const double> v, Matrix& out);
void weight_axpby(Matrix& a, double eta, const Matrix& g, double decay);
} // namespace par

void matvec(const Matrix& a, std::span<const double> x, std::span<double> y);
void outer(std::span<const double> u, std::span<const double> v, Matrix& out);
void weight_axpby(Matrix& a, double eta, const Matrix& g, double decay);

} // namespace pcgen::kernels
