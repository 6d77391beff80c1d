#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <vector>

#include "mcrmri/pixel_table.hpp"

namespace mcrmri::cube {

/// Column-wise augmented multiset: per-frame pixel tables sharing the echo
/// axis, stacked row-wise in time order.
struct MultisetStack {
    std::vector<PixelTable> blocks;
    std::vector<double> frame_times_h;   // strictly increasing
    std::vector<Eigen::Index> row_offsets;  // start row per block

    Eigen::Index total_rows() const;
    int n_echoes() const { return blocks.empty() ? 0 : blocks.front().meta.n_echoes; }

    /// Dense augmented matrix (total_rows x n_echoes).
    Eigen::MatrixXd augmented() const;

    /// Frame index and in-block row for an augmented row index.
    std::pair<int, Eigen::Index> locate(Eigen::Index augmented_row) const;
};

MultisetStack build_multiset(std::vector<PixelTable> tables, std::vector<double> times_h);

struct ManifestEntry {
    std::filesystem::path path;
    double frame_time_h = 0.0;
};

/// JSON manifest: [{"path": ..., "frame_time_h": ...}, ...]. Relative paths
/// resolve against the manifest's directory.
std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path);
void write_manifest(const std::vector<ManifestEntry>& entries,
                    const std::filesystem::path& path);

} // namespace mcrmri::cube
