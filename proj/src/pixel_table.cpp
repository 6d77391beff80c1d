#include "mcrmri/pixel_table.hpp"

#include "mcrmri/errors.hpp"

namespace mcrmri::cube {

PixelTable unfold(const HyperCube& cube, const ForegroundMask& mask) {
    cube.validate();
    if (mask.width != cube.meta.width || mask.height != cube.meta.height)
        throw FormatError("unfold: mask dimensions do not match cube");
    const std::size_t n = mask.count();
    if (n == 0) throw NumericError("unfold: empty foreground");

    PixelTable table;
    table.meta = cube.meta;
    table.values.resize(static_cast<Eigen::Index>(n), cube.meta.n_echoes);
    table.index_map.reserve(n);

    Eigen::Index i = 0;
    for (int r = 0; r < cube.meta.height; ++r) {
        for (int c = 0; c < cube.meta.width; ++c) {
            if (!mask.at(r, c)) continue;
            for (int m = 0; m < cube.meta.n_echoes; ++m)
                table.values(i, m) = cube.at(r, c, m);
            table.index_map.emplace_back(r, c);
            ++i;
        }
    }
    return table;
}

std::vector<double> refold(const Eigen::VectorXd& values,
                           const std::vector<std::pair<int, int>>& index_map,
                           int width, int height, double fill) {
    if (static_cast<std::size_t>(values.size()) != index_map.size())
        throw NumericError("refold: value count does not match index map");
    std::vector<double> raster(static_cast<std::size_t>(width) * height, fill);
    for (std::size_t i = 0; i < index_map.size(); ++i) {
        const auto [r, c] = index_map[i];
        if (r < 0 || r >= height || c < 0 || c >= width)
            throw NumericError("refold: index map coordinate out of bounds");
        raster[static_cast<std::size_t>(r) * width + c] = values(static_cast<Eigen::Index>(i));
    }
    return raster;
}

} // namespace mcrmri::cube
