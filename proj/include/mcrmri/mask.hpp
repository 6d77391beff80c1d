#pragma once

#include <filesystem>
#include <variant>
#include <vector>

#include "mcrmri/cube.hpp"

namespace mcrmri::cube {

struct ForegroundMask {
    int width = 0;
    int height = 0;
    std::vector<uint8_t> bits;  // nonzero = foreground, raster order

    bool at(int row, int col) const { return bits[static_cast<std::size_t>(row) * width + col] != 0; }
    std::size_t count() const;
};

struct OtsuMask {};
struct FixedFractionMask {
    double fraction = 0.5;  // foreground iff mean > fraction * max mean
};
struct ExternalMask {
    std::filesystem::path path;  // 8-bit binary PGM, nonzero = foreground
};
using MaskMethod = std::variant<OtsuMask, FixedFractionMask, ExternalMask>;

/// Threshold the echo-mean image. Otsu uses 256 bins over [min, max] and
/// refuses degenerate (flat) histograms; an empty foreground is an error.
ForegroundMask compute_mask(const HyperCube& cube, const MaskMethod& method);

/// Echo-mean image in raster order (the statistic every method thresholds).
std::vector<double> echo_mean_image(const HyperCube& cube);

ForegroundMask read_mask_pgm(const std::filesystem::path& path);
void write_mask_pgm(const ForegroundMask& mask, const std::filesystem::path& path);

/// 3x3 box smoothing of every echo plane (edge-clamped window). Used to
/// build the initialization copy of the data, not the data itself.
HyperCube smooth3x3(const HyperCube& cube);

} // namespace mcrmri::cube
