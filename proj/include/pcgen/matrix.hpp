#pragma once

#include <cstddef>
#include <vector>

namespace pcgen {

using Vec = std::vector<double>;

// Dense row-major matrix. For a forward weight M^(i) rows index the layer
// above, columns the layer below; backward weights W^(i) are stored in their
// own orientation so every product in the hot loop walks rows contiguously.
struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(int r, int c) : rows(r), cols(c), data(static_cast<size_t>(r) * c, 0.0) {}

    double& operator()(int r, int c) { return data[static_cast<size_t>(r) * cols + c]; }
    double operator()(int r, int c) const { return data[static_cast<size_t>(r) * cols + c]; }

    double* row(int r) { return data.data() + static_cast<size_t>(r) * cols; }
    const double* row(int r) const { return data.data() + static_cast<size_t>(r) * cols; }

    bool empty() const { return rows == 0 || cols == 0; }
    size_t size() const { return data.size(); }

    bool operator==(const Matrix& other) const = default;
};

Matrix transpose(const Matrix& a);
double frobenius_norm(const Matrix& a);
double max_abs_diff(const Matrix& a, const Matrix& b);

} // namespace pcgen
