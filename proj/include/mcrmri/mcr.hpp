#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "mcrmri/ilt.hpp"
#include "mcrmri/multiset.hpp"
#include "mcrmri/numkit.hpp"

namespace mcrmri::mcr {

enum class Normalization { euclidean, none };

struct ConstraintSpec {
    bool nonneg_C = true;
    bool nonneg_S = true;
    Normalization normalize_S = Normalization::euclidean;
    std::vector<bool> shape_decay;  // one flag per component; empty = none
    ilt::IltParams ilt_projection;  // grid + lambda policy for the projection

    void validate(int k) const;
};

struct AlsOptions {
    int max_iterations = 100;
    double lof_rel_tol_pct = 0.1;    // stop when relative lof change < tol %
    int divergence_patience = 20;    // consecutive lof increases before abort
    uint64_t seed = 0;               // stored for reproducibility records
    int threads = 1;                 // 0 = hardware concurrency
};

enum class AlsStatus { converged, max_iter, diverged };

std::string to_string(AlsStatus s);

struct DecompositionResult {
    Eigen::MatrixXd C_aug;  // total rows x k
    Eigen::MatrixXd S;      // n_echoes x k
    num::FitDiagnostics diagnostics;
    std::vector<double> lof_trace;  // per iteration, percent
    AlsStatus status = AlsStatus::max_iter;
    ConstraintSpec constraints;
    std::vector<Eigen::Index> block_offsets;
    std::vector<double> frame_times_h;
    int best_iteration = 0;
};

/// Alternating least squares on the augmented matrix. Per iteration:
/// C-step (row-wise NNLS or LS against S), S-step (column-wise against C),
/// shape projection of flagged S columns, column normalization with the
/// inverse rescale moved into C. Returns the best-lof iterate.
DecompositionResult als_decompose(const cube::MultisetStack& stack,
                                  const Eigen::MatrixXd& S0,
                                  const ConstraintSpec& constraints,
                                  const AlsOptions& opts);

/// C_aug sliced back into one (pixels x k) block per frame.
std::vector<Eigen::MatrixXd> split_concentrations(const DecompositionResult& result,
                                                  const cube::MultisetStack& stack);

} // namespace mcrmri::mcr
