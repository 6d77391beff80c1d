#pragma once

#include <Eigen/Dense>
#include <vector>

namespace mcrmri::simplisma {

struct PuritySelection {
    std::vector<Eigen::Index> selected_rows;  // pixel rows of D, pick order
    std::vector<double> purity_values;        // purity maximum at each pick
    double offset_fraction = 0.05;
};

struct SimplismaResult {
    Eigen::MatrixXd S0;  // n_echoes x k, unit Euclidean norm columns
    PuritySelection selection;
};

/// Pure-pixel selection: purity_i = sigma_i / (mu_i + alpha) with alpha =
/// offset_fraction * max(mu), statistics over each row's echo samples.
/// From the second pick on, purities are weighted by the determinant of the
/// correlation-around-origin matrix of the picked rows plus the candidate.
/// Ties break to the lowest row index. S0 columns are the selected rows of D
/// scaled to unit norm.
SimplismaResult simplisma_init(const Eigen::MatrixXd& D, int k, double offset_fraction = 0.05);

} // namespace mcrmri::simplisma
