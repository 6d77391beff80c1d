#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "mcrmri/cube.hpp"
#include "mcrmri/mask.hpp"

namespace mcrmri::cube {

/// Unfolded foreground pixels: one matrix row per pixel, one column per echo.
/// Row order is raster-scan (row-major, top-left to bottom-right) so unfold
/// and refold are exact inverses on the foreground.
struct PixelTable {
    Eigen::MatrixXd values;                       // n_foreground x n_echoes
    std::vector<std::pair<int, int>> index_map;   // (row, col) per matrix row
    AcquisitionMeta meta;
};

PixelTable unfold(const HyperCube& cube, const ForegroundMask& mask);

/// Places `values[i]` at `index_map[i]`, `fill` elsewhere. Raster order.
std::vector<double> refold(const Eigen::VectorXd& values,
                           const std::vector<std::pair<int, int>>& index_map,
                           int width, int height, double fill = 0.0);

} // namespace mcrmri::cube
