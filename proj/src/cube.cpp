#include "mcrmri/cube.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

#include <json.hpp>

#include "mcrmri/errors.hpp"

namespace mcrmri::cube {

using nlohmann::json;

std::vector<double> AcquisitionMeta::echo_times_ms() const {
    std::vector<double> t(n_echoes);
    for (int m = 0; m < n_echoes; ++m) t[m] = echo_time_ms(m);
    return t;
}

void HyperCube::validate() const {
    if (meta.width < 1 || meta.height < 1)
        throw FormatError("cube: matrix_size must be positive");
    if (kind == "acquisition") {
        if (meta.te1_ms <= 0) throw FormatError("cube: te1_ms must be > 0");
        if (meta.delta_te_ms <= 0) throw FormatError("cube: delta_te_ms must be > 0");
        if (meta.n_echoes < 2) throw FormatError("cube: n_echoes must be >= 2");
    } else if (meta.n_echoes < 1) {
        throw FormatError("cube: n_echoes must be >= 1");
    }
    const std::size_t expected = static_cast<std::size_t>(meta.width) * meta.height * meta.n_echoes;
    if (data.size() != expected)
        throw FormatError("cube: data size does not match matrix_size and n_echoes");
    for (float v : data)
        if (!std::isfinite(v)) throw FormatError("cube: non-finite value in data");
}

HyperCube make_cube(const AcquisitionMeta& meta, std::string kind) {
    HyperCube c;
    c.meta = meta;
    c.kind = std::move(kind);
    c.data.assign(static_cast<std::size_t>(meta.width) * meta.height * meta.n_echoes, 0.0f);
    return c;
}

namespace {

constexpr char kMagic[4] = {'M', 'R', 'C', '1'};

double require_number(const json& j, const char* field) {
    if (!j.contains(field) || !j[field].is_number())
        throw FormatError(std::string("cube header: missing or non-numeric field '") + field + "'");
    return j[field].get<double>();
}

int require_int(const json& j, const char* field) {
    const double v = require_number(j, field);
    if (v != std::floor(v)) throw FormatError(std::string("cube header: field '") + field + "' must be an integer");
    return static_cast<int>(v);
}

void to_little_endian(std::vector<float>& v) {
    if constexpr (std::endian::native == std::endian::big) {
        for (float& f : v) {
            uint32_t u;
            std::memcpy(&u, &f, 4);
            u = __builtin_bswap32(u);
            std::memcpy(&f, &u, 4);
        }
    }
}

} // namespace

HyperCube read_cube(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cube: cannot open '" + path.string() + "'");

    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0)
        throw FormatError("cube: bad magic in '" + path.string() + "'");

    std::string header;
    char ch;
    while (in.get(ch)) {
        if (ch == '\0') break;
        header.push_back(ch);
        if (header.size() > 65536) throw FormatError("cube: unterminated header");
    }
    if (!in) throw FormatError("cube: truncated header");

    json j;
    try {
        j = json::parse(header);
    } catch (const json::parse_error& e) {
        throw FormatError(std::string("cube: header is not valid JSON: ") + e.what());
    }

    HyperCube c;
    c.meta.width = require_int(j, "width");
    c.meta.height = require_int(j, "height");
    c.meta.n_echoes = require_int(j, "n_echoes");
    c.meta.te1_ms = require_number(j, "te1_ms");
    c.meta.delta_te_ms = require_number(j, "delta_te_ms");
    c.meta.tr_s = require_number(j, "tr_s");
    if (!j.contains("fov_mm") || !j["fov_mm"].is_array() || j["fov_mm"].size() != 2)
        throw FormatError("cube header: field 'fov_mm' must be a two-element array");
    c.meta.fov_mm[0] = j["fov_mm"][0].get<double>();
    c.meta.fov_mm[1] = j["fov_mm"][1].get<double>();
    c.meta.slice_thickness_um = require_number(j, "slice_thickness_um");
    c.meta.frame_time_h = require_number(j, "frame_time_h");
    c.kind = j.value("kind", "acquisition");

    if (c.meta.width < 1 || c.meta.height < 1 || c.meta.n_echoes < 1)
        throw FormatError("cube header: non-positive dimension");

    const std::size_t count =
        static_cast<std::size_t>(c.meta.width) * c.meta.height * c.meta.n_echoes;
    c.data.resize(count);
    in.read(reinterpret_cast<char*>(c.data.data()), static_cast<std::streamsize>(count * 4));
    if (static_cast<std::size_t>(in.gcount()) != count * 4)
        throw FormatError("cube: payload smaller than width*height*n_echoes");
    if (in.get(ch)) throw FormatError("cube: payload larger than width*height*n_echoes");
    to_little_endian(c.data);

    for (float v : c.data)
        if (!std::isfinite(v)) throw FormatError("cube: non-finite value in payload");
    c.validate();
    return c;
}

void write_cube(const HyperCube& cube, const std::filesystem::path& path) {
    cube.validate();

    json j;
    j["width"] = cube.meta.width;
    j["height"] = cube.meta.height;
    j["n_echoes"] = cube.meta.n_echoes;
    j["te1_ms"] = cube.meta.te1_ms;
    j["delta_te_ms"] = cube.meta.delta_te_ms;
    j["tr_s"] = cube.meta.tr_s;
    j["fov_mm"] = {cube.meta.fov_mm[0], cube.meta.fov_mm[1]};
    j["slice_thickness_um"] = cube.meta.slice_thickness_um;
    j["frame_time_h"] = cube.meta.frame_time_h;
    if (cube.kind != "acquisition") j["kind"] = cube.kind;

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError("cube: cannot write '" + path.string() + "'");
    out.write(kMagic, 4);
    const std::string header = j.dump();
    out.write(header.data(), static_cast<std::streamsize>(header.size()));
    out.put('\0');

    std::vector<float> payload = cube.data;
    to_little_endian(payload);
    out.write(reinterpret_cast<const char*>(payload.data()),
              static_cast<std::streamsize>(payload.size() * 4));
    if (!out) throw FormatError("cube: I/O failure writing '" + path.string() + "'");
}

} // namespace mcrmri::cube
