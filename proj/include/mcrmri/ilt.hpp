#pragma once

#include <Eigen/Dense>
#include <vector>

namespace mcrmri::ilt {

/// Log-spaced relaxation-time grid (constant ratio between points).
struct T2Grid {
    std::vector<double> t2_values_ms;
    int n_points = 64;
    double t2_min_ms = 1.0;
    double t2_max_ms = 1000.0;
};

T2Grid make_log_grid(double t2_min_ms = 1.0, double t2_max_ms = 1000.0, int n_points = 64);

struct FixedLambda {
    double lambda = 0.0;
};
struct LCurveLambda {
    double lambda_min_factor = 1e-4;  // times ||K||
    double lambda_max_factor = 10.0;
    int n_candidates = 25;
};

struct IltParams {
    T2Grid grid = make_log_grid();
    bool use_lcurve = true;
    FixedLambda fixed;
    LCurveLambda lcurve;
};

struct RelaxationSpectrum {
    std::vector<double> amplitudes;  // >= 0, over the grid
    double lambda_used = 0.0;
    double residual_norm = 0.0;      // ||K x - s||, data misfit only
    double signal_scale = 0.0;       // max of the input signal
};

struct LCurvePoint {
    double residual_norm = 0.0;
    double solution_norm = 0.0;
    double lambda = 0.0;
};

struct Peak {
    double t2_ms = 0.0;
    double amplitude = 0.0;
    double fraction_of_total = 0.0;  // contiguous-support cluster mass / total
};

/// K[m, j] = exp(-t_m / T2_j)
Eigen::MatrixXd build_kernel(const std::vector<double>& echo_times_ms, const T2Grid& grid);

/// Spectral norm of the kernel (reference scale for lambda).
double kernel_norm(const Eigen::MatrixXd& K);

/// argmin ||K x - s||^2 + lambda^2 ||x||^2 s.t. x >= 0, solved as NNLS on
/// the augmented system [K; lambda I] with target [s; 0].
RelaxationSpectrum ilt_solve(const Eigen::VectorXd& signal,
                             const std::vector<double>& echo_times_ms,
                             const IltParams& params);

/// Discrete L-curve: solve per candidate lambda, pick the maximum-curvature
/// interior point of the log-log curve. Returns the choice and all points.
std::pair<double, std::vector<LCurvePoint>> select_lambda(
    const Eigen::VectorXd& signal, const std::vector<double>& echo_times_ms,
    const IltParams& params);

/// Nearest regularized non-negative sum of decaying exponentials: K * x with
/// x from ilt_solve. The zero column maps to itself.
Eigen::VectorXd shape_project(const Eigen::VectorXd& spectrum_column,
                              const std::vector<double>& echo_times_ms,
                              const IltParams& params);

/// Local maxima (strictly greater than the left neighbor, plateaus take the
/// leftmost index), sorted by amplitude descending.
std::vector<Peak> peaks(const RelaxationSpectrum& spectrum, const T2Grid& grid);

} // namespace mcrmri::ilt
