#include "mcrmri/multiset.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "mcrmri/errors.hpp"

namespace mcrmri::cube {

using nlohmann::json;

Eigen::Index MultisetStack::total_rows() const {
    Eigen::Index n = 0;
    for (const auto& b : blocks) n += b.values.rows();
    return n;
}

Eigen::MatrixXd MultisetStack::augmented() const {
    Eigen::MatrixXd D(total_rows(), n_echoes());
    for (std::size_t i = 0; i < blocks.size(); ++i)
        D.middleRows(row_offsets[i], blocks[i].values.rows()) = blocks[i].values;
    return D;
}

std::pair<int, Eigen::Index> MultisetStack::locate(Eigen::Index row) const {
    for (std::size_t i = blocks.size(); i-- > 0;) {
        if (row >= row_offsets[i]) return {static_cast<int>(i), row - row_offsets[i]};
    }
    throw NumericError("multiset: augmented row out of range");
}

MultisetStack build_multiset(std::vector<PixelTable> tables, std::vector<double> times_h) {
    if (tables.empty()) throw NumericError("build_multiset: need at least one table");
    if (tables.size() != times_h.size())
        throw NumericError("build_multiset: table and time counts differ");

    const auto& first = tables.front().meta;
    for (const auto& t : tables) {
        if (t.meta.n_echoes != first.n_echoes || t.meta.te1_ms != first.te1_ms ||
            t.meta.delta_te_ms != first.delta_te_ms)
            throw FormatError("build_multiset: images not co-registered on echo dimension");
        if (t.values.rows() != static_cast<Eigen::Index>(t.index_map.size()))
            throw NumericError("build_multiset: corrupt pixel table");
    }
    for (std::size_t i = 1; i < times_h.size(); ++i)
        if (!(times_h[i] > times_h[i - 1]))
            throw NumericError("build_multiset: frame times must be strictly increasing");

    MultisetStack stack;
    stack.row_offsets.reserve(tables.size());
    Eigen::Index offset = 0;
    for (const auto& t : tables) {
        stack.row_offsets.push_back(offset);
        offset += t.values.rows();
    }
    stack.blocks = std::move(tables);
    stack.frame_times_h = std::move(times_h);
    return stack;
}

std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("manifest: cannot open '" + path.string() + "'");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw FormatError(std::string("manifest: invalid JSON: ") + e.what());
    }
    if (!j.is_array() || j.empty())
        throw FormatError("manifest: expected a non-empty JSON array");

    const auto base = path.parent_path();
    std::vector<ManifestEntry> entries;
    entries.reserve(j.size());
    for (const auto& item : j) {
        if (!item.contains("path") || !item.contains("frame_time_h"))
            throw FormatError("manifest: entries need 'path' and 'frame_time_h'");
        ManifestEntry e;
        std::filesystem::path p = item["path"].get<std::string>();
        e.path = p.is_absolute() ? p : base / p;
        e.frame_time_h = item["frame_time_h"].get<double>();
        entries.push_back(std::move(e));
    }
    return entries;
}

void write_manifest(const std::vector<ManifestEntry>& entries,
                    const std::filesystem::path& path) {
    json j = json::array();
    const auto base = path.parent_path();
    for (const auto& e : entries) {
        json item;
        std::error_code ec;
        auto rel = std::filesystem::relative(e.path, base, ec);
        item["path"] = (ec || rel.empty()) ? e.path.string() : rel.string();
        item["frame_time_h"] = e.frame_time_h;
        j.push_back(item);
    }
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw FormatError("manifest: cannot write '" + path.string() + "'");
    out << j.dump(2) << "\n";
}

} // namespace mcrmri::cube
