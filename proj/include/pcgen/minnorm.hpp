#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "pcgen/matrix.hpp"

namespace pcgen {

// Exact linear-algebra reference for the minimum 2-norm results: SVD-based
// least-squares solves, the constructive matrix A with min-norm rows, and a
// randomized checker for the claims. The network dynamics are tested against
// this module, never the other way around.

struct MinNormSolution {
    Vec x;
    double residual = 0.0;      // ||A x - b||_2
    double solution_norm = 0.0; // ||x||_2
    int rank = 0;               // numerical rank used for the pseudoinverse
};

// Among all least-squares solutions of A x = b, the one of minimum 2-norm.
// Singular values below max(rows, cols) * sigma_max * 1e-12 are treated as
// zero and reported through `rank`.
MinNormSolution min_norm_solve(const Matrix& a, std::span<const double> b);

// Given X (m x r, independent columns) and Y (n x r) with r <= n < m, builds
// the n x m matrix A = Y U S^-1 V^T (SVD X = U S V^T) whose rows are the
// min-norm solutions of row_j X = y_j and which maps every X_i to Y_i.
Matrix construct_A(const Matrix& x, const Matrix& y);

struct TheoremReport {
    bool pass = false;
    bool hypothesis_ok = false;
    std::string message;
    double max_construction_residual = 0.0; // max |(A X - Y)_ij|
    double max_recovery_rel_err = 0.0;      // worst ||solve(A, Y_i) - X_i|| / ||X_i||
    double min_margin = 0.0;                // worst ||X_i + z|| - ||X_i||, z in null(A)
};

// Builds A from (X, Y), then checks per column that the min-norm solve
// recovers X_i and that every sampled null-space perturbation strictly
// increases the norm. Hypothesis violations are reported, never passed.
TheoremReport verify_theorem(const Matrix& x, const Matrix& y, int n_perturbations,
                             uint64_t seed);

// Orthonormal basis of null(A) as matrix columns (empty when A has full
// column rank).
Matrix null_space(const Matrix& a);

} // namespace pcgen
