#include "mcrmri/numkit.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mcrmri/errors.hpp"

namespace mcrmri::num {

namespace {

bool all_finite(const Eigen::MatrixXd& m) { return m.allFinite(); }

// Solve G_PP x_P = h_P for the passive set. Returns false when the
// subsystem is numerically singular (candidate rejected by the caller).
bool solve_passive(const Eigen::MatrixXd& G, const Eigen::VectorXd& h,
                   const std::vector<int>& passive, Eigen::VectorXd& z) {
    const int p = static_cast<int>(passive.size());
    Eigen::MatrixXd Gp(p, p);
    Eigen::VectorXd hp(p);
    for (int i = 0; i < p; ++i) {
        hp(i) = h(passive[i]);
        for (int j = 0; j < p; ++j) Gp(i, j) = G(passive[i], passive[j]);
    }
    Eigen::LDLT<Eigen::MatrixXd> ldlt(Gp);
    if (ldlt.info() != Eigen::Success) return false;
    z = ldlt.solve(hp);
    return z.allFinite();
}

} // namespace

Eigen::VectorXd nnls_normal(const Eigen::MatrixXd& G, const Eigen::VectorXd& h) {
    const int n = static_cast<int>(G.cols());
    const double tol = 1e-10 * G.cwiseAbs().rowwise().sum().maxCoeff();

    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    std::vector<char> in_passive(n, 0);
    std::vector<int> passive;
    passive.reserve(n);

    Eigen::VectorXd w(n), z;
    const int max_iter = 3 * n;
    int iter = 0;

    while (true) {
        w = h - G * x;  // negative gradient

        // Pick the steepest eligible candidate; reject near-dependent
        // columns (or non-positive proposed values) and fall through to
        // the next best without recomputing w.
        std::vector<char> rejected(n, 0);
        bool accepted = false;
        while (!accepted) {
            int best = -1;
            double wmax = tol;
            for (int j = 0; j < n; ++j) {
                if (!in_passive[j] && !rejected[j] && w(j) > wmax) {
                    wmax = w(j);
                    best = j;
                }
            }
            if (best < 0) break;  // KKT satisfied on the remaining set
            passive.push_back(best);
            in_passive[best] = 1;
            if (solve_passive(G, h, passive, z) && z(z.size() - 1) > tol) {
                accepted = true;
            } else {
                passive.pop_back();
                in_passive[best] = 0;
                rejected[best] = 1;
            }
        }
        if (!accepted) break;

        // Inner loop: pull x toward z, dropping coordinates that hit zero.
        while (!passive.empty() && z.minCoeff() <= 0.0) {
            if (++iter > max_iter) {
                throw ConvergenceError("nnls: iteration cap (3n) exceeded");
            }
            double alpha = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < passive.size(); ++i) {
                const double zi = z(static_cast<int>(i));
                if (zi <= 0.0) {
                    const int j = passive[i];
                    alpha = std::min(alpha, x(j) / (x(j) - zi));
                }
            }
            for (std::size_t i = 0; i < passive.size(); ++i) {
                const int j = passive[i];
                x(j) += alpha * (z(static_cast<int>(i)) - x(j));
            }
            std::vector<int> kept;
            kept.reserve(passive.size());
            for (int j : passive) {
                if (x(j) <= tol || !std::isfinite(x(j))) {
                    x(j) = 0.0;
                    in_passive[j] = 0;
                } else {
                    kept.push_back(j);
                }
            }
            passive.swap(kept);
            if (passive.empty()) break;
            if (!solve_passive(G, h, passive, z)) {
                throw NumericError("nnls: singular passive subsystem");
            }
        }
        x.setZero();
        for (std::size_t i = 0; i < passive.size(); ++i)
            x(passive[i]) = z(static_cast<int>(i));
    }

    for (int j = 0; j < n; ++j)
        if (x(j) < 0.0) x(j) = 0.0;
    return x;
}

NnlsResult nnls(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
    if (A.rows() < 1 || A.cols() < 1) throw NumericError("nnls: empty problem");
    if (A.rows() != b.size()) throw NumericError("nnls: shape mismatch");
    if (!all_finite(A) || !b.allFinite()) throw NumericError("nnls: non-finite input");

    const Eigen::MatrixXd G = A.transpose() * A;
    const Eigen::VectorXd h = A.transpose() * b;
    NnlsResult r;
    r.x = nnls_normal(G, h);
    r.residual_norm = (A * r.x - b).norm();
    return r;
}

RankScan svd_scan(const Eigen::MatrixXd& D) {
    if (D.rows() < 1 || D.cols() < 1) throw NumericError("svd_scan: empty matrix");
    if (!all_finite(D)) throw NumericError("svd_scan: non-finite input");

    // Eigendecompose the Gram matrix of the short axis; singular values of D
    // are the square roots of its eigenvalues.
    const bool tall = D.rows() >= D.cols();
    Eigen::MatrixXd G = tall ? Eigen::MatrixXd(D.transpose() * D)
                             : Eigen::MatrixXd(D * D.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G);
    if (es.info() != Eigen::Success) throw NumericError("svd_scan: eigensolver failed");

    Eigen::VectorXd ev = es.eigenvalues();  // ascending
    RankScan scan;
    scan.singular_values.reserve(ev.size());
    for (int i = static_cast<int>(ev.size()) - 1; i >= 0; --i)
        scan.singular_values.push_back(std::sqrt(std::max(0.0, ev(i))));

    constexpr std::size_t kMaxValues = 50;
    if (scan.singular_values.size() > kMaxValues) scan.singular_values.resize(kMaxValues);

    if (scan.singular_values.front() <= 0.0)
        throw NumericError("svd_scan: zero matrix has no rank suggestion");

    const std::size_t nsv = scan.singular_values.size();
    std::vector<double> tail(scan.singular_values.begin() + nsv / 2,
                             scan.singular_values.end());
    std::sort(tail.begin(), tail.end());
    scan.noise_floor = tail.size() % 2 == 1
                           ? tail[tail.size() / 2]
                           : 0.5 * (tail[tail.size() / 2 - 1] + tail[tail.size() / 2]);

    int count = 0;
    for (double s : scan.singular_values)
        if (s > 2.0 * scan.noise_floor) ++count;
    scan.suggested_rank = std::clamp(count, 1, static_cast<int>(nsv));
    return scan;
}

FitDiagnostics diagnostics_from_sums(double sum_sq_data, double sum_sq_residual) {
    if (sum_sq_data <= 0.0) throw NumericError("fit_diagnostics: zero data matrix");
    FitDiagnostics d;
    d.sum_sq_data = sum_sq_data;
    d.sum_sq_residual = sum_sq_residual;
    const double ratio = sum_sq_residual / sum_sq_data;
    d.explained_variance_pct = 100.0 * (1.0 - ratio);
    d.lack_of_fit_pct = 100.0 * std::sqrt(ratio);
    return d;
}

FitDiagnostics fit_diagnostics(const Eigen::MatrixXd& D, const Eigen::MatrixXd& C,
                               const Eigen::MatrixXd& S) {
    if (C.rows() != D.rows() || S.rows() != D.cols() || C.cols() != S.cols())
        throw NumericError("fit_diagnostics: shape mismatch");
    const Eigen::MatrixXd E = D - C * S.transpose();
    return diagnostics_from_sums(D.squaredNorm(), E.squaredNorm());
}

Eigen::MatrixXd rank_filter(const Eigen::MatrixXd& D, int rank) {
    if (rank < 1) throw NumericError("rank_filter: rank must be positive");
    const int t = static_cast<int>(D.cols());
    if (rank >= t) return D;
    Eigen::MatrixXd G = D.transpose() * D;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G);
    if (es.info() != Eigen::Success) throw NumericError("rank_filter: eigensolver failed");
    // leading eigenvectors are the last columns (ascending order)
    Eigen::MatrixXd V = es.eigenvectors().rightCols(rank);
    return (D * V) * V.transpose();
}

} // namespace mcrmri::num
