#pragma once

#include <Eigen/Dense>
#include <vector>

namespace mcrmri::num {

/// Singular-value scan used to suggest a component count. The suggestion is
/// advisory; the full scree is always returned for inspection.
struct RankScan {
    std::vector<double> singular_values;  // descending, >= 0
    int suggested_rank = 1;
    double noise_floor = 0.0;  // median of the trailing half of the scree
};

struct FitDiagnostics {
    double explained_variance_pct = 0.0;  // 100 * (1 - ssr/ssd)
    double lack_of_fit_pct = 0.0;         // 100 * sqrt(ssr/ssd)
    double sum_sq_data = 0.0;
    double sum_sq_residual = 0.0;
};

struct NnlsResult {
    Eigen::VectorXd x;          // >= 0 exactly
    double residual_norm = 0.0; // ||A x - b||_2
};

/// Non-negative least squares, Lawson-Hanson active set.
/// KKT tolerance: 1e-10 * ||A'A||_inf on the gradient. Throws
/// NumericError on non-finite input, ConvergenceError past 3n
/// inner iterations.
NnlsResult nnls(const Eigen::MatrixXd& A, const Eigen::VectorXd& b);

/// Same active-set iteration expressed on the normal equations
/// (G = A'A, h = A'b). This is the kernel the ALS engine calls with a
/// shared Gram matrix and per-row right-hand sides.
Eigen::VectorXd nnls_normal(const Eigen::MatrixXd& G, const Eigen::VectorXd& h);

RankScan svd_scan(const Eigen::MatrixXd& D);

FitDiagnostics fit_diagnostics(const Eigen::MatrixXd& D, const Eigen::MatrixXd& C,
                               const Eigen::MatrixXd& S);

FitDiagnostics diagnostics_from_sums(double sum_sq_data, double sum_sq_residual);

/// Rank-k reconstruction D V_k V_k' via the Gram matrix of the short axis.
/// Used to noise-filter the initialization input, not the decomposition data.
Eigen::MatrixXd rank_filter(const Eigen::MatrixXd& D, int rank);

} // namespace mcrmri::num
