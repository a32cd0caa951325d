#include <doctest.h>

#include "pcgen/kernels.hpp"
#include "pcgen/rng.hpp"

using namespace pcgen;

namespace {

Matrix random_matrix(int rows, int cols, Rng& rng) {
    Matrix m(rows, cols);
    for (auto& v : m.data) v = rng.uniform(-1.0, 1.0);
    return m;
}

Vec random_vec(int n, Rng& rng) {
    Vec v(n);
    for (auto& x : v) x = rng.uniform(-1.0, 1.0);
    return v;
}

} // namespace

TEST_CASE("matvec matches a plain double loop") {
    Rng rng(1);
    const Matrix a = random_matrix(7, 5, rng);
    const Vec x = random_vec(5, rng);
    Vec y(7);
    kernels::serial::matvec(a, x, y);
    for (int r = 0; r < 7; ++r) {
        double acc = 0.0;
        for (int c = 0; c < 5; ++c) acc += a(r, c) * x[c];
        CHECK(y[r] == doctest::Approx(acc).epsilon(1e-15));
    }
}

TEST_CASE("parallel kernels are bitwise identical to the serial reference") {
    Rng rng(2);
    // spans both sides of the dispatch threshold
    for (auto [rows, cols] : {std::pair{3, 4}, {100, 784}, {600, 600}, {1, 2000}}) {
        const Matrix a = random_matrix(rows, cols, rng);
        const Vec x = random_vec(cols, rng);
        Vec ys(rows), yp(rows);
        kernels::serial::matvec(a, x, ys);
        kernels::par::matvec(a, x, yp);
        CHECK(ys == yp);

        const Vec u = random_vec(rows, rng), v = random_vec(cols, rng);
        Matrix os(rows, cols), op(rows, cols);
        kernels::serial::outer(u, v, os);
        kernels::par::outer(u, v, op);
        CHECK(os.data == op.data);

        Matrix ws = random_matrix(rows, cols, rng);
        Matrix wp = ws;
        const Matrix g = random_matrix(rows, cols, rng);
        kernels::serial::weight_axpby(ws, 0.37, g, 0.011);
        kernels::par::weight_axpby(wp, 0.37, g, 0.011);
        CHECK(ws.data == wp.data);
    }
}

TEST_CASE("dispatching wrappers honor the parallel switch") {
    Rng rng(3);
    const Matrix a = random_matrix(200, 200, rng); // above threshold
    const Vec x = random_vec(200, rng);
    Vec y_on(200), y_off(200);
    kernels::set_parallel(true);
    kernels::matvec(a, x, y_on);
    kernels::set_parallel(false);
    kernels::matvec(a, x, y_off);
    kernels::set_parallel(true);
    CHECK(y_on == y_off);
}

TEST_CASE("outer product basic shape") {
    Matrix o(1, 2);
    kernels::outer(Vec{1.0}, Vec{2.0, 3.0}, o);
    CHECK(o(0, 0) == 2.0);
    CHECK(o(0, 1) == 3.0);
}
