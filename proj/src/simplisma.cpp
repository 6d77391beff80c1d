#include "mcrmri/simplisma.hpp"

#include <cmath>

#include "mcrmri/errors.hpp"

namespace mcrmri::simplisma {

namespace {

double coo_det(const Eigen::MatrixXd& M) {
    if (M.rows() == 1) return M(0, 0);
    return M.determinant();
}

} // namespace

SimplismaResult simplisma_init(const Eigen::MatrixXd& D, int k, double offset_fraction) {
    const Eigen::Index m = D.rows();
    const Eigen::Index t = D.cols();
    if (k < 1) throw NumericError("simplisma: k must be >= 1");
    if (k > std::min(m, t)) throw NumericError("simplisma: k exceeds matrix dimensions");
    if (!(offset_fraction > 0.0)) throw NumericError("simplisma: offset_fraction must be > 0");
    if (!D.allFinite()) throw NumericError("simplisma: non-finite input");

    const Eigen::VectorXd mu = D.rowwise().mean();
    Eigen::VectorXd sd(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        const double mean_sq = D.row(i).squaredNorm() / static_cast<double>(t);
        sd(i) = std::sqrt(std::max(0.0, mean_sq - mu(i) * mu(i)));
    }
    const double alpha = offset_fraction * mu.maxCoeff();

    // length used for the correlation-around-origin scaling (with offset)
    Eigen::VectorXd lambda(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        const double l = std::sqrt(mu(i) * mu(i) + (sd(i) + alpha) * (sd(i) + alpha));
        lambda(i) = l > 0.0 ? l : 1.0;
    }
    Eigen::VectorXd purity(m);
    for (Eigen::Index i = 0; i < m; ++i) purity(i) = sd(i) / (mu(i) + alpha);

    auto coo = [&](Eigen::Index a, Eigen::Index b) {
        return D.row(a).dot(D.row(b)) / (lambda(a) * lambda(b) * static_cast<double>(t));
    };

    SimplismaResult res;
    res.selection.offset_fraction = offset_fraction;
    std::vector<Eigen::Index>& picked = res.selection.selected_rows;

    for (int step = 0; step < k; ++step) {
        Eigen::Index best = -1;
        double best_score = -1.0;
        double best_weight = -1.0;
        const int p = static_cast<int>(picked.size());

        Eigen::MatrixXd M(p + 1, p + 1);
        for (int a = 0; a < p; ++a)
            for (int b = 0; b < p; ++b) M(a + 1, b + 1) = coo(picked[a], picked[b]);

        double max_weight = 0.0;
        for (Eigen::Index j = 0; j < m; ++j) {
            bool already = false;
            for (Eigen::Index q : picked) already |= (q == j);
            if (already) continue;

            double weight = 1.0;
            if (p > 0) {
                M(0, 0) = coo(j, j);
                for (int a = 0; a < p; ++a) {
                    const double v = coo(j, picked[a]);
                    M(0, a + 1) = v;
                    M(a + 1, 0) = v;
                }
                weight = coo_det(M.topLeftCorner(p + 1, p + 1));
            }
            max_weight = std::max(max_weight, weight);
            const double score = weight * purity(j);
            if (score > best_score) {  // strict: ties keep the lowest index
                best_score = score;
                best = j;
                best_weight = weight;
            }
        }
        if (p > 0 && max_weight < 1e-12)
            throw NumericError("simplisma: insufficient distinct pure variables");
        if (best < 0) throw NumericError("simplisma: no eligible rows left");
        (void)best_weight;
        picked.push_back(best);
        res.selection.purity_values.push_back(best_score);
    }

    res.S0.resize(t, k);
    for (int i = 0; i < k; ++i) {
        Eigen::VectorXd col = D.row(picked[i]).transpose();
        const double n = col.norm();
        if (n <= 0.0) throw NumericError("simplisma: selected row has zero norm");
        res.S0.col(i) = col / n;
    }
    return res;
}

} // namespace mcrmri::simplisma
