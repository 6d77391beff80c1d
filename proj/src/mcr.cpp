#include "mcrmri/mcr.hpp"

#include <cmath>
#include <mutex>

#include "mcrmri/errors.hpp"
#include "mcrmri/parallel.hpp"

namespace mcrmri::mcr {

void ConstraintSpec::validate(int k) const {
    if (!shape_decay.empty() && static_cast<int>(shape_decay.size()) != k)
        throw NumericError("constraints: shape_decay length must equal component count");
}

std::string to_string(AlsStatus s) {
    switch (s) {
        case AlsStatus::converged: return "converged";
        case AlsStatus::max_iter: return "max_iter";
        case AlsStatus::diverged: return "diverged";
    }
    return "unknown";
}

namespace {

// Row-wise solve of min ||B x_i - rhs_i|| (optionally x >= 0) where every row
// shares the Gram matrix of B. Writes row i of `out`. Bit-deterministic per
// row, so thread count cannot change results.
void solve_rows(const Eigen::MatrixXd& B, const Eigen::MatrixXd& rhs_rows,
                bool nonneg, int threads, Eigen::MatrixXd& out,
                std::exception_ptr& error) {
    const Eigen::MatrixXd G = B.transpose() * B;
    Eigen::LDLT<Eigen::MatrixXd> ldlt;
    if (!nonneg) {
        ldlt.compute(G);
        if (ldlt.info() != Eigen::Success)
            throw NumericError("als: singular least-squares system");
    }
    const Eigen::MatrixXd H = rhs_rows * B;  // m x k right-hand sides
    std::mutex err_mutex;
    parallel_for(static_cast<std::size_t>(rhs_rows.rows()), threads,
                 [&](std::size_t lo, std::size_t hi) {
                     try {
                         for (std::size_t i = lo; i < hi; ++i) {
                             const Eigen::VectorXd h = H.row(static_cast<Eigen::Index>(i)).transpose();
                             Eigen::VectorXd x = nonneg ? num::nnls_normal(G, h) : ldlt.solve(h);
                             out.row(static_cast<Eigen::Index>(i)) = x.transpose();
                         }
                     } catch (...) {
                         std::scoped_lock lock(err_mutex);
                         if (!error) error = std::current_exception();
                     }
                 });
    if (error) std::rethrow_exception(error);
}

double lack_of_fit_pct(const Eigen::MatrixXd& D, const Eigen::MatrixXd& C,
                       const Eigen::MatrixXd& S, int threads, double sum_sq_data,
                       double& sum_sq_residual) {
    std::vector<double> row_ssr(static_cast<std::size_t>(D.rows()));
    parallel_for(row_ssr.size(), threads, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            const Eigen::Index r = static_cast<Eigen::Index>(i);
            row_ssr[i] = (D.row(r) - C.row(r) * S.transpose()).squaredNorm();
        }
    });
    sum_sq_residual = pairwise_sum(row_ssr);
    return 100.0 * std::sqrt(sum_sq_residual / sum_sq_data);
}

} // namespace

DecompositionResult als_decompose(const cube::MultisetStack& stack,
                                  const Eigen::MatrixXd& S0,
                                  const ConstraintSpec& constraints,
                                  const AlsOptions& opts) {
    const int k = static_cast<int>(S0.cols());
    const int t = stack.n_echoes();
    if (k < 1) throw NumericError("als: need at least one component");
    if (S0.rows() != t) throw NumericError("als: S0 row count must equal n_echoes");
    if (k > t) throw NumericError("als: more components than echoes");
    for (int j = 0; j < k; ++j)
        if (S0.col(j).norm() == 0.0)
            throw NumericError("als: S0 is rank-deficient (zero column)");
    constraints.validate(k);
    if (opts.max_iterations < 1 || opts.divergence_patience < 1 ||
        !(opts.lof_rel_tol_pct > 0.0))
        throw NumericError("als: options must be positive");

    const Eigen::MatrixXd D = stack.augmented();
    const double sum_sq_data = D.squaredNorm();
    if (sum_sq_data <= 0.0) throw NumericError("als: zero data matrix");
    const std::vector<double> echo_times = stack.blocks.front().meta.echo_times_ms();

    DecompositionResult res;
    res.constraints = constraints;
    res.block_offsets = stack.row_offsets;
    res.frame_times_h = stack.frame_times_h;

    Eigen::MatrixXd S = S0;
    Eigen::MatrixXd C(D.rows(), k);
    Eigen::MatrixXd Dt = D.transpose();

    double best_lof = std::numeric_limits<double>::infinity();
    double prev_lof = std::numeric_limits<double>::infinity();
    int rises = 0;
    res.status = AlsStatus::max_iter;

    for (int it = 0; it < opts.max_iterations; ++it) {
        std::exception_ptr err;
        solve_rows(S, D, constraints.nonneg_C, opts.threads, C, err);

        Eigen::MatrixXd Snew(t, k);
        solve_rows(C, Dt, constraints.nonneg_S, opts.threads, Snew, err);
        S = Snew;

        for (int j = 0; j < k; ++j) {
            if (j < static_cast<int>(constraints.shape_decay.size()) && constraints.shape_decay[j])
                S.col(j) = ilt::shape_project(S.col(j), echo_times, constraints.ilt_projection);
        }

        if (constraints.normalize_S == Normalization::euclidean) {
            for (int j = 0; j < k; ++j) {
                const double n = S.col(j).norm();
                if (n > 0.0) {
                    S.col(j) /= n;
                    C.col(j) *= n;
                }
            }
        }

        double ssr = 0.0;
        const double lof = lack_of_fit_pct(D, C, S, opts.threads, sum_sq_data, ssr);
        res.lof_trace.push_back(lof);

        if (lof < best_lof) {
            best_lof = lof;
            res.C_aug = C;
            res.S = S;
            res.diagnostics = num::diagnostics_from_sums(sum_sq_data, ssr);
            res.best_iteration = it;
        }

        if (it > 0) {
            rises = lof > prev_lof ? rises + 1 : 0;
            if (rises >= opts.divergence_patience) {
                res.status = AlsStatus::diverged;
                break;
            }
            const double rel_change_pct =
                prev_lof == 0.0 ? 0.0 : 100.0 * std::abs(prev_lof - lof) / prev_lof;
            if (rel_change_pct < opts.lof_rel_tol_pct) {
                res.status = AlsStatus::converged;
                break;
            }
        }
        prev_lof = lof;
    }
    return res;
}

std::vector<Eigen::MatrixXd> split_concentrations(const DecompositionResult& result,
                                                  const cube::MultisetStack& stack) {
    if (result.block_offsets != stack.row_offsets)
        throw NumericError("split_concentrations: result and stack offsets disagree");
    std::vector<Eigen::MatrixXd> out;
    out.reserve(stack.blocks.size());
    for (std::size_t i = 0; i < stack.blocks.size(); ++i) {
        const Eigen::Index rows = stack.blocks[i].values.rows();
        out.push_back(result.C_aug.middleRows(stack.row_offsets[i], rows));
    }
    return out;
}

} // namespace mcrmri::mcr
