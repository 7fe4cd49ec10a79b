#include "hrne/features.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "hrne/error.hpp"
#include "hrne/ops.hpp"

namespace hrne {

namespace {

constexpr char kMagic[4] = {'H', 'R', 'N', 'F'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::ostream& out, std::uint32_t v) {
    char b[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                 static_cast<char>((v >> 16) & 0xff), static_cast<char>((v >> 24) & 0xff)};
    out.write(b, 4);
}

bool get_u32(std::istream& in, std::uint32_t& v) {
    unsigned char b[4];
    if (!in.read(reinterpret_cast<char*>(b), 4)) return false;
    v = static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
        (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
    return true;
}

}  // namespace

FeatureSequence load_features(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("feature file not readable: " + path);

    char magic[4];
    if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) {
        throw IoError("feature file has bad magic: " + path);
    }
    std::uint32_t version = 0, t = 0, d = 0;
    if (!get_u32(in, version) || !get_u32(in, t) || !get_u32(in, d)) {
        throw IoError("feature file header truncated: " + path);
    }
    if (version != kVersion) {
        throw IoError("feature file has unsupported version " + std::to_string(version) + ": " +
                      path);
    }
    if (t == 0) throw IoError("feature file declares zero frames: " + path);
    if (d == 0) throw IoError("feature file declares zero dimension: " + path);

    FeatureSequence fs;
    fs.dim = d;
    fs.frames.reserve(t);
    std::vector<unsigned char> raw(static_cast<std::size_t>(d) * 4);
    for (std::uint32_t i = 0; i < t; ++i) {
        if (!in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()))) {
            throw IoError("feature file payload truncated: " + path);
        }
        Tensor frame = Tensor::vector(d);
        for (std::uint32_t j = 0; j < d; ++j) {
            std::uint32_t bits = static_cast<std::uint32_t>(raw[j * 4]) |
                                 (static_cast<std::uint32_t>(raw[j * 4 + 1]) << 8) |
                                 (static_cast<std::uint32_t>(raw[j * 4 + 2]) << 16) |
                                 (static_cast<std::uint32_t>(raw[j * 4 + 3]) << 24);
            frame[j] = static_cast<double>(std::bit_cast<float>(bits));
        }
        check_finite(frame.span(), "feature frame");
        fs.frames.push_back(std::move(frame));
    }
    return fs;
}

void save_features(const std::string& path, const FeatureSequence& fs) {
    if (fs.length() == 0) throw IoError("save_features: empty sequence");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("feature file not writable: " + path);
    out.write(kMagic, 4);
    put_u32(out, kVersion);
    put_u32(out, static_cast<std::uint32_t>(fs.length()));
    put_u32(out, static_cast<std::uint32_t>(fs.dim));
    for (const Tensor& frame : fs.frames) {
        for (std::size_t j = 0; j < fs.dim; ++j) {
            const std::uint32_t bits = std::bit_cast<std::uint32_t>(static_cast<float>(frame[j]));
            put_u32(out, bits);
        }
    }
    if (!out) throw IoError("save_features: write failed: " + path);
}

FeatureSequence pad_truncate(const FeatureSequence& xs, std::size_t target_len) {
    FeatureSequence out;
    out.dim = xs.dim;
    const std::size_t keep = std::min(xs.length(), target_len);
    out.frames.assign(xs.frames.begin(), xs.frames.begin() + static_cast<std::ptrdiff_t>(keep));
    while (out.frames.size() < target_len) out.frames.push_back(Tensor::vector(xs.dim));
    return out;
}

}  // namespace hrne
