#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace mcrmri::cube {

struct AcquisitionMeta {
    double te1_ms = 5.0;
    double delta_te_ms = 5.0;
    int n_echoes = 32;
    double tr_s = 1.5;
    double fov_mm[2] = {10.0, 10.0};
    int width = 128;
    int height = 128;
    double slice_thickness_um = 500.0;
    double frame_time_h = 0.0;

    double echo_time_ms(int echo) const { return te1_ms + echo * delta_te_ms; }
    std::vector<double> echo_times_ms() const;
};

/// One image frame: (height x width x n_echoes) raster plus metadata.
/// Stored row-major in (row, col, echo) order, matching the file layout.
/// kind "acquisition" is a measured frame; "concentration" reuses the echo
/// axis for component planes and skips acquisition-specific checks.
struct HyperCube {
    AcquisitionMeta meta;
    std::vector<float> data;
    std::string kind = "acquisition";

    std::size_t index(int row, int col, int echo) const {
        return (static_cast<std::size_t>(row) * meta.width + col) * meta.n_echoes + echo;
    }
    float at(int row, int col, int echo) const { return data[index(row, col, echo)]; }
    float& at(int row, int col, int echo) { return data[index(row, col, echo)]; }

    /// Throws FormatError when dimensions disagree or values are non-finite.
    void validate() const;
};

HyperCube make_cube(const AcquisitionMeta& meta, std::string kind = "acquisition");

/// Cube file: "MRC1" magic, UTF-8 JSON header, one NUL byte, then
/// width*height*n_echoes little-endian float32 in (row, col, echo) order.
HyperCube read_cube(const std::filesystem::path& path);
void write_cube(const HyperCube& cube, const std::filesystem::path& path);

} // namespace mcrmri::cube
