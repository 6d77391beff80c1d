#include "mcrmri/ilt.hpp"

#include <algorithm>
#include <cmath>

#include "mcrmri/errors.hpp"
#include "mcrmri/numkit.hpp"

namespace mcrmri::ilt {

T2Grid make_log_grid(double t2_min_ms, double t2_max_ms, int n_points) {
    if (!(t2_min_ms > 0.0) || !(t2_max_ms > t2_min_ms))
        throw NumericError("t2 grid: bounds must satisfy 0 < min < max");
    if (n_points < 2) throw NumericError("t2 grid: need at least two points");
    T2Grid g;
    g.t2_min_ms = t2_min_ms;
    g.t2_max_ms = t2_max_ms;
    g.n_points = n_points;
    g.t2_values_ms.resize(n_points);
    const double step = std::log(t2_max_ms / t2_min_ms) / (n_points - 1);
    for (int j = 0; j < n_points; ++j) g.t2_values_ms[j] = t2_min_ms * std::exp(j * step);
    g.t2_values_ms.back() = t2_max_ms;
    return g;
}

Eigen::MatrixXd build_kernel(const std::vector<double>& echo_times_ms, const T2Grid& grid) {
    if (echo_times_ms.empty()) throw NumericError("build_kernel: no echo times");
    for (std::size_t m = 0; m < echo_times_ms.size(); ++m) {
        if (!(echo_times_ms[m] > 0.0)) throw NumericError("build_kernel: non-positive echo time");
        if (m > 0 && !(echo_times_ms[m] > echo_times_ms[m - 1]))
            throw NumericError("build_kernel: echo times must ascend");
    }
    Eigen::MatrixXd K(echo_times_ms.size(), grid.t2_values_ms.size());
    for (Eigen::Index m = 0; m < K.rows(); ++m)
        for (Eigen::Index j = 0; j < K.cols(); ++j)
            K(m, j) = std::exp(-echo_times_ms[m] / grid.t2_values_ms[j]);
    return K;
}

double kernel_norm(const Eigen::MatrixXd& K) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(K.transpose() * K);
    return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

namespace {

RelaxationSpectrum solve_fixed(const Eigen::MatrixXd& K, const Eigen::VectorXd& s,
                               double lambda) {
    // normal equations of [K; lambda I]: (K'K + lambda^2 I) x = K's
    Eigen::MatrixXd G = K.transpose() * K;
    G.diagonal().array() += lambda * lambda;
    const Eigen::VectorXd h = K.transpose() * s;
    const Eigen::VectorXd x = num::nnls_normal(G, h);

    RelaxationSpectrum out;
    out.amplitudes.assign(x.data(), x.data() + x.size());
    out.lambda_used = lambda;
    out.residual_norm = (K * x - s).norm();
    out.signal_scale = s.cwiseAbs().maxCoeff();
    return out;
}

} // namespace

RelaxationSpectrum ilt_solve(const Eigen::VectorXd& signal,
                             const std::vector<double>& echo_times_ms,
                             const IltParams& params) {
    if (static_cast<std::size_t>(signal.size()) != echo_times_ms.size())
        throw NumericError("ilt_solve: signal and echo time lengths differ");
    if (!signal.allFinite()) throw NumericError("ilt_solve: non-finite signal");
    if (signal.cwiseAbs().maxCoeff() == 0.0) throw NumericError("ilt_solve: empty signal");

    const Eigen::MatrixXd K = build_kernel(echo_times_ms, params.grid);
    double lambda;
    if (params.use_lcurve) {
        lambda = select_lambda(signal, echo_times_ms, params).first;
    } else {
        lambda = params.fixed.lambda;
        if (!(lambda >= 0.0)) throw NumericError("ilt_solve: lambda must be >= 0");
    }
    return solve_fixed(K, signal, lambda);
}

std::pair<double, std::vector<LCurvePoint>> select_lambda(
    const Eigen::VectorXd& signal, const std::vector<double>& echo_times_ms,
    const IltParams& params) {
    const auto& lc = params.lcurve;
    if (lc.n_candidates < 3) throw NumericError("select_lambda: need at least 3 candidates");
    if (!(lc.lambda_min_factor > 0.0) || !(lc.lambda_max_factor > lc.lambda_min_factor))
        throw NumericError("select_lambda: bad lambda range");
    if (signal.cwiseAbs().maxCoeff() == 0.0) throw NumericError("select_lambda: empty signal");

    const Eigen::MatrixXd K = build_kernel(echo_times_ms, params.grid);
    const double kn = kernel_norm(K);

    std::vector<LCurvePoint> points(lc.n_candidates);
    const double log_lo = std::log(lc.lambda_min_factor * kn);
    const double log_hi = std::log(lc.lambda_max_factor * kn);
    for (int i = 0; i < lc.n_candidates; ++i) {
        const double lam = std::exp(log_lo + (log_hi - log_lo) * i / (lc.n_candidates - 1));
        RelaxationSpectrum sp = solve_fixed(K, signal, lam);
        double sol_norm = 0.0;
        for (double a : sp.amplitudes) sol_norm += a * a;
        points[i] = {sp.residual_norm, std::sqrt(sol_norm), lam};
    }

    // Menger curvature of the log-log curve; endpoints excluded.
    auto log_floor = [](double v) { return std::log(std::max(v, 1e-300)); };
    double best_curv = -std::numeric_limits<double>::infinity();
    int best_i = 1;
    for (int i = 1; i + 1 < lc.n_candidates; ++i) {
        const double x0 = log_floor(points[i - 1].residual_norm), y0 = log_floor(points[i - 1].solution_norm);
        const double x1 = log_floor(points[i].residual_norm), y1 = log_floor(points[i].solution_norm);
        const double x2 = log_floor(points[i + 1].residual_norm), y2 = log_floor(points[i + 1].solution_norm);
        const double ax = x1 - x0, ay = y1 - y0;
        const double bx = x2 - x1, by = y2 - y1;
        const double cx = x2 - x0, cy = y2 - y0;
        const double la = std::hypot(ax, ay), lb = std::hypot(bx, by), lcn = std::hypot(cx, cy);
        if (la == 0.0 || lb == 0.0 || lcn == 0.0) continue;
        const double curv = 2.0 * (ax * by - ay * bx) / (la * lb * lcn);
        if (curv > best_curv) {
            best_curv = curv;
            best_i = i;
        }
    }
    return {points[best_i].lambda, points};
}

Eigen::VectorXd shape_project(const Eigen::VectorXd& spectrum_column,
                              const std::vector<double>& echo_times_ms,
                              const IltParams& params) {
    if (spectrum_column.cwiseAbs().maxCoeff() == 0.0) return spectrum_column;
    const RelaxationSpectrum sp = ilt_solve(spectrum_column, echo_times_ms, params);
    const Eigen::MatrixXd K = build_kernel(echo_times_ms, params.grid);
    Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(sp.amplitudes.data(),
                                                          static_cast<Eigen::Index>(sp.amplitudes.size()));
    return K * x;
}

std::vector<Peak> peaks(const RelaxationSpectrum& spectrum, const T2Grid& grid) {
    const auto& x = spectrum.amplitudes;
    const int n = static_cast<int>(x.size());
    double total = 0.0;
    for (double v : x) total += v;

    std::vector<Peak> out;
    for (int j = 0; j < n; ++j) {
        if (x[j] <= 0.0) continue;
        const double left = j > 0 ? x[j - 1] : -1.0;
        const double right = j + 1 < n ? x[j + 1] : -1.0;
        // plateau takes the leftmost index: strict on the left, loose right
        if (x[j] > left && x[j] >= right) {
            int lo = j, hi = j;
            while (lo > 0 && x[lo - 1] > 0.0) --lo;
            while (hi + 1 < n && x[hi + 1] > 0.0) ++hi;
            double mass = 0.0;
            for (int q = lo; q <= hi; ++q) mass += x[q];
            out.push_back({grid.t2_values_ms[j], x[j], total > 0.0 ? mass / total : 0.0});
        }
    }
    std::sort(out.begin(), out.end(),
              [](const Peak& a, const Peak& b) { return a.amplitude > b.amplitude; });
    return out;
}

} // namespace mcrmri::ilt
