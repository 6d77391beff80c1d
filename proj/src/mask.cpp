#include "mcrmri/mask.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "mcrmri/errors.hpp"

namespace mcrmri::cube {

std::size_t ForegroundMask::count() const {
    std::size_t n = 0;
    for (uint8_t b : bits) n += (b != 0);
    return n;
}

std::vector<double> echo_mean_image(const HyperCube& cube) {
    const int w = cube.meta.width, h = cube.meta.height, e = cube.meta.n_echoes;
    std::vector<double> mean(static_cast<std::size_t>(w) * h, 0.0);
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            double s = 0.0;
            for (int m = 0; m < e; ++m) s += cube.at(r, c, m);
            mean[static_cast<std::size_t>(r) * w + c] = s / e;
        }
    }
    return mean;
}

namespace {

double otsu_threshold(const std::vector<double>& img) {
    const double lo = *std::min_element(img.begin(), img.end());
    const double hi = *std::max_element(img.begin(), img.end());
    if (!(hi > lo)) throw NumericError("compute_mask: degenerate histogram");

    constexpr int kBins = 256;
    std::vector<double> hist(kBins, 0.0);
    const double scale = kBins / (hi - lo);
    for (double v : img) {
        int b = static_cast<int>((v - lo) * scale);
        hist[std::clamp(b, 0, kBins - 1)] += 1.0;
    }
    const double total = static_cast<double>(img.size());
    for (double& b : hist) b /= total;

    // maximize between-class variance over the bin threshold
    double mu_total = 0.0;
    for (int b = 0; b < kBins; ++b) mu_total += hist[b] * (b + 0.5);
    double omega = 0.0, mu = 0.0, best = -1.0;
    int best_bin = 0;
    for (int b = 0; b < kBins - 1; ++b) {
        omega += hist[b];
        mu += hist[b] * (b + 0.5);
        if (omega <= 0.0 || omega >= 1.0) continue;
        const double d = mu_total * omega - mu;
        const double var_b = d * d / (omega * (1.0 - omega));
        if (var_b > best) {
            best = var_b;
            best_bin = b;
        }
    }
    if (best < 0) throw NumericError("compute_mask: degenerate histogram");
    return lo + (best_bin + 1) / scale;
}

} // namespace

ForegroundMask compute_mask(const HyperCube& cube, const MaskMethod& method) {
    cube.validate();
    ForegroundMask mask;
    mask.width = cube.meta.width;
    mask.height = cube.meta.height;
    mask.bits.assign(static_cast<std::size_t>(mask.width) * mask.height, 0);

    if (const auto* ext = std::get_if<ExternalMask>(&method)) {
        ForegroundMask m = read_mask_pgm(ext->path);
        if (m.width != mask.width || m.height != mask.height)
            throw FormatError("compute_mask: external mask dimensions do not match cube");
        if (m.count() == 0) throw NumericError("compute_mask: empty foreground");
        return m;
    }

    const std::vector<double> mean = echo_mean_image(cube);
    double threshold;
    if (const auto* ff = std::get_if<FixedFractionMask>(&method)) {
        if (!(ff->fraction > 0.0 && ff->fraction < 1.0))
            throw NumericError("compute_mask: fixed_fraction requires 0 < f < 1");
        threshold = ff->fraction * *std::max_element(mean.begin(), mean.end());
    } else {
        threshold = otsu_threshold(mean);
    }
    for (std::size_t i = 0; i < mean.size(); ++i)
        mask.bits[i] = mean[i] > threshold ? 1 : 0;
    if (mask.count() == 0) throw NumericError("compute_mask: empty foreground");
    return mask;
}

ForegroundMask read_mask_pgm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("mask: cannot open '" + path.string() + "'");

    auto next_token = [&in]() {
        std::string tok;
        char c;
        while (in.get(c)) {
            if (c == '#') {
                while (in.get(c) && c != '\n') {}
                continue;
            }
            if (std::isspace(static_cast<unsigned char>(c))) {
                if (!tok.empty()) break;
                continue;
            }
            tok.push_back(c);
        }
        return tok;
    };

    if (next_token() != "P5") throw FormatError("mask: not a binary PGM (P5)");
    const int width = std::stoi(next_token());
    const int height = std::stoi(next_token());
    const int maxval = std::stoi(next_token());
    if (width < 1 || height < 1) throw FormatError("mask: non-positive dimensions");
    if (maxval < 1 || maxval > 255) throw FormatError("mask: expected 8-bit PGM");

    ForegroundMask m;
    m.width = width;
    m.height = height;
    m.bits.resize(static_cast<std::size_t>(width) * height);
    in.read(reinterpret_cast<char*>(m.bits.data()), static_cast<std::streamsize>(m.bits.size()));
    if (static_cast<std::size_t>(in.gcount()) != m.bits.size())
        throw FormatError("mask: truncated PGM payload");
    for (uint8_t& b : m.bits) b = b != 0 ? 1 : 0;
    return m;
}

void write_mask_pgm(const ForegroundMask& mask, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError("mask: cannot write '" + path.string() + "'");
    out << "P5\n" << mask.width << " " << mask.height << "\n255\n";
    std::vector<uint8_t> bytes(mask.bits.size());
    for (std::size_t i = 0; i < bytes.size(); ++i) bytes[i] = mask.bits[i] ? 255 : 0;
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw FormatError("mask: I/O failure writing '" + path.string() + "'");
}

HyperCube smooth3x3(const HyperCube& cube) {
    const int w = cube.meta.width, h = cube.meta.height, e = cube.meta.n_echoes;
    HyperCube out = cube;
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            const int r0 = std::max(0, r - 1), r1 = std::min(h - 1, r + 1);
            const int c0 = std::max(0, c - 1), c1 = std::min(w - 1, c + 1);
            const float inv = 1.0f / static_cast<float>((r1 - r0 + 1) * (c1 - c0 + 1));
            for (int m = 0; m < e; ++m) {
                float s = 0.0f;
                for (int rr = r0; rr <= r1; ++rr)
                    for (int cc = c0; cc <= c1; ++cc) s += cube.at(rr, cc, m);
                out.at(r, c, m) = s * inv;
            }
        }
    }
    return out;
}

} // namespace mcrmri::cube
