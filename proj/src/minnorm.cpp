#include "pcgen/minnorm.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <cmath>

#include "pcgen/errors.hpp"
#include "pcgen/rng.hpp"

namespace pcgen {

namespace {

Eigen::MatrixXd to_eigen(const Matrix& a) {
    return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                          Eigen::RowMajor>>(a.data.data(), a.rows, a.cols);
}

Matrix from_eigen(const Eigen::MatrixXd& e) {
    Matrix out(static_cast<int>(e.rows()), static_cast<int>(e.cols()));
    for (int r = 0; r < out.rows; ++r)
        for (int c = 0; c < out.cols; ++c) out(r, c) = e(r, c);
    return out;
}

double rank_cutoff(const Eigen::VectorXd& sv, int rows, int cols) {
    const double smax = sv.size() ? sv(0) : 0.0;
    return std::max(rows, cols) * smax * 1e-12;
}

} // namespace

MinNormSolution min_norm_solve(const Matrix& a, std::span<const double> b) {
    if (a.empty()) throw std::domain_error("min_norm_solve: empty matrix");
    if (static_cast<int>(b.size()) != a.rows)
        throw ConfigError("min_norm_solve: rhs size does not match rows");

    const Eigen::MatrixXd ea = to_eigen(a);
    const Eigen::VectorXd eb = Eigen::Map<const Eigen::VectorXd>(b.data(), b.size());

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(ea, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& sv = svd.singularValues();
    const double cut = rank_cutoff(sv, a.rows, a.cols);

    // x = V S^+ U^T b restricted to singular values above the cutoff
    Eigen::VectorXd utb = svd.matrixU().transpose() * eb;
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i) {
        if (sv(i) > cut) {
            utb(i) /= sv(i);
            ++rank;
        } else {
            utb(i) = 0.0;
        }
    }
    const Eigen::VectorXd x = svd.matrixV() * utb;

    MinNormSolution out;
    out.x.assign(x.data(), x.data() + x.size());
    out.residual = (ea * x - eb).norm();
    out.solution_norm = x.norm();
    out.rank = rank;
    return out;
}

Matrix construct_A(const Matrix& x, const Matrix& y) {
    if (x.empty() || y.empty()) throw std::domain_error("construct_A: empty matrix");
    const int m = x.rows, r = x.cols, n = y.rows;
    if (y.cols != r) throw ConfigError("construct_A: X and Y must have the same column count");
    if (!(r <= n && n < m))
        throw ConfigError("construct_A: requires r <= n < m, got r=" + std::to_string(r) +
                          " n=" + std::to_string(n) + " m=" + std::to_string(m));

    const Eigen::MatrixXd ex = to_eigen(x);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(ex, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& sv = svd.singularValues();
    const double cut = rank_cutoff(sv, m, r);
    for (int i = 0; i < sv.size(); ++i)
        if (!(sv(i) > cut))
            throw ConfigError("construct_A: columns of X are not linearly independent "
                              "(numerical rank below r)");

    // X = U S V^T  =>  A = Y V S^-1 U^T maps each X_i to Y_i with min-norm rows
    const Eigen::MatrixXd a =
        to_eigen(y) * svd.matrixV() * sv.cwiseInverse().asDiagonal() * svd.matrixU().transpose();
    return from_eigen(a);
}

Matrix null_space(const Matrix& a) {
    const Eigen::MatrixXd ea = to_eigen(a);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(ea, Eigen::ComputeFullV);
    const Eigen::VectorXd& sv = svd.singularValues();
    const double cut = rank_cutoff(sv, a.rows, a.cols);
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > cut) ++rank;
    const Eigen::MatrixXd v = svd.matrixV();
    return from_eigen(v.rightCols(v.cols() - rank));
}

TheoremReport verify_theorem(const Matrix& x, const Matrix& y, int n_perturbations,
                             uint64_t seed) {
    TheoremReport rep;
    const int m = x.rows, r = x.cols, n = y.rows;
    if (y.cols != r) {
        rep.message = "hypothesis violated: X and Y column counts differ";
        return rep;
    }
    if (!(r <= n && n < m)) {
        rep.message = "hypothesis violated: need r <= n < m, got r=" + std::to_string(r) +
                      " n=" + std::to_string(n) + " m=" + std::to_string(m);
        return rep;
    }
    Matrix a;
    try {
        a = construct_A(x, y);
    } catch (const ConfigError& e) {
        rep.message = std::string("hypothesis violated: ") + e.what();
        return rep;
    }
    rep.hypothesis_ok = true;

    const Eigen::MatrixXd ea = to_eigen(a);
    const Eigen::MatrixXd resid = ea * to_eigen(x) - to_eigen(y);
    rep.max_construction_residual = resid.cwiseAbs().maxCoeff();

    const Matrix nsp = null_space(a);
    Rng rng(seed);
    rep.min_margin = std::numeric_limits<double>::infinity();

    for (int i = 0; i < r; ++i) {
        Vec yi(n), xi(m);
        for (int j = 0; j < n; ++j) yi[j] = y(j, i);
        for (int j = 0; j < m; ++j) xi[j] = x(j, i);
        const MinNormSolution sol = min_norm_solve(a, yi);
        double diff = 0.0, nrm = 0.0;
        for (int j = 0; j < m; ++j) {
            diff += (sol.x[j] - xi[j]) * (sol.x[j] - xi[j]);
            nrm += xi[j] * xi[j];
        }
        rep.max_recovery_rel_err =
            std::max(rep.max_recovery_rel_err, std::sqrt(diff) / std::sqrt(nrm));

        // random nonzero null-space perturbations must strictly grow the norm
        for (int p = 0; p < n_perturbations && nsp.cols > 0; ++p) {
            Vec z(m, 0.0);
            double zn = 0.0;
            do {
                std::fill(z.begin(), z.end(), 0.0);
                for (int c = 0; c < nsp.cols; ++c) {
                    const double coef = rng.gaussian(0.0, 1.0);
                    for (int j = 0; j < m; ++j) z[j] += coef * nsp(j, c);
                }
                zn = 0.0;
                for (double v : z) zn += v * v;
            } while (zn == 0.0);
            const double scale = rng.uniform(0.5, 2.0) / std::sqrt(zn);
            double pert = 0.0;
            for (int j = 0; j < m; ++j) {
                const double w = xi[j] + scale * z[j];
                pert += w * w;
            }
            rep.min_margin = std::min(rep.min_margin, std::sqrt(pert) - std::sqrt(nrm));
        }
    }
    if (nsp.cols == 0) rep.min_margin = 0.0; // no null directions to test

    rep.pass = rep.max_construction_residual < 1e-10 && rep.max_recovery_rel_err < 1e-8 &&
               (nsp.cols == 0 || rep.min_margin > 0.0);
    rep.message = rep.pass ? "ok" : "claim check failed";
    return rep;
}

} // namespace pcgen
