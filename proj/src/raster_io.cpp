#include "tactilemap/raster_io.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

namespace tactilemap {

static_assert(std::endian::native == std::endian::little,
              "raster format is little-endian; big-endian hosts need byte swaps");

namespace {

constexpr char kMagic[6] = {'T', 'M', 'R', 'A', 'S', 'T'};
constexpr uint8_t kVersion = 1;
constexpr size_t kHeaderSize = 64;

struct Header {
    RasterKind kind;
    uint32_t width;
    uint32_t height;
    uint32_t channels;
    double mm_per_pixel;
};

void write_header(std::ostream& os, const Header& h) {
    char buf[kHeaderSize] = {};
    std::memcpy(buf, kMagic, 6);
    buf[6] = char(kVersion);
    buf[7] = char(uint8_t(h.kind));
    std::memcpy(buf + 8, &h.width, 4);
    std::memcpy(buf + 12, &h.height, 4);
    std::memcpy(buf + 16, &h.channels, 4);
    std::memcpy(buf + 20, &h.mm_per_pixel, 8);
    os.write(buf, kHeaderSize);
}

Header read_header(std::istream& is, const std::string& path) {
    char buf[kHeaderSize];
    is.read(buf, kHeaderSize);
    require(bool(is), ErrorCode::CorruptFile, "truncated raster header: " + path);
    require(std::memcmp(buf, kMagic, 6) == 0, ErrorCode::CorruptFile, "bad raster magic: " + path);
    require(uint8_t(buf[6]) == kVersion, ErrorCode::CorruptFile, "unsupported raster version: " + path);
    Header h;
    uint8_t kind = uint8_t(buf[7]);
    require(kind >= 1 && kind <= 4, ErrorCode::CorruptFile, "unknown raster kind: " + path);
    h.kind = RasterKind(kind);
    std::memcpy(&h.width, buf + 8, 4);
    std::memcpy(&h.height, buf + 12, 4);
    std::memcpy(&h.channels, buf + 16, 4);
    std::memcpy(&h.mm_per_pixel, buf + 20, 8);
    return h;
}

void save_payload(const std::string& path, const Header& h, const float* data, size_t n) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    require(bool(os), ErrorCode::IoFailure, "cannot open for writing: " + path);
    write_header(os, h);
    os.write(reinterpret_cast<const char*>(data), std::streamsize(n * sizeof(float)));
    require(bool(os), ErrorCode::IoFailure, "write failed: " + path);
}

std::vector<float> load_payload(std::istream& is, const Header& h, const std::string& path) {
    require(h.width > 0 && h.height > 0 && h.channels > 0 && h.width < (1u << 20) &&
                h.height < (1u << 20),
            ErrorCode::CorruptFile, "implausible raster dimensions: " + path);
    size_t n = size_t(h.width) * h.height * h.channels;
    std::vector<float> data(n);
    is.read(reinterpret_cast<char*>(data.data()), std::streamsize(n * sizeof(float)));
    require(bool(is), ErrorCode::CorruptFile, "truncated raster payload: " + path);
    for (float v : data)
        require(std::isfinite(v), ErrorCode::CorruptFile, "non-finite value in raster: " + path);
    return data;
}

Header expect_kind(const std::string& path, RasterKind kind, uint32_t channels, std::ifstream& is) {
    is.open(path, std::ios::binary);
    require(bool(is), ErrorCode::IoFailure, "cannot open: " + path);
    Header h = read_header(is, path);
    require(h.kind == kind, ErrorCode::CorruptFile, "raster kind mismatch: " + path);
    require(h.channels == channels, ErrorCode::CorruptFile, "raster channel count mismatch: " + path);
    return h;
}

}  // namespace

RasterInfo peek_raster(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    require(bool(is), ErrorCode::IoFailure, "cannot open: " + path);
    Header h = read_header(is, path);
    return {h.kind, int(h.width), int(h.height), int(h.channels), h.mm_per_pixel};
}

void save_raster(const std::string& path, const HeightMap& h) {
    h.validate();
    save_payload(path, {RasterKind::Height, uint32_t(h.width()), uint32_t(h.height()), 1, h.mm_per_pixel()},
                 h.data().data(), h.data().size());
}

void save_raster(const std::string& path, const NormalMap& n) {
    n.validate();
    save_payload(path, {RasterKind::Normal, uint32_t(n.width()), uint32_t(n.height()), 3, 0.0},
                 n.data().data(), n.data().size());
}

void save_raster(const std::string& path, const TactileImage& img) {
    img.validate();
    save_payload(path, {RasterKind::Image, uint32_t(img.width()), uint32_t(img.height()), 3, 0.0},
                 img.data().data(), img.data().size());
}

void save_raster(const std::string& path, const BinaryMask& mask) {
    std::vector<float> tmp(mask.data().size());
    for (size_t i = 0; i < tmp.size(); ++i) tmp[i] = mask.data()[i] ? 1.0f : 0.0f;
    save_payload(path, {RasterKind::Mask, uint32_t(mask.width()), uint32_t(mask.height()), 1, 0.0},
                 tmp.data(), tmp.size());
}

HeightMap load_height(const std::string& path) {
    std::ifstream is;
    Header h = expect_kind(path, RasterKind::Height, 1, is);
    require(h.mm_per_pixel > 0, ErrorCode::CorruptFile, "non-positive mm_per_pixel: " + path);
    return HeightMap(int(h.width), int(h.height), load_payload(is, h, path), h.mm_per_pixel);
}

NormalMap load_normals(const std::string& path) {
    std::ifstream is;
    Header h = expect_kind(path, RasterKind::Normal, 3, is);
    NormalMap n(int(h.width), int(h.height), load_payload(is, h, path));
    n.validate();
    return n;
}

TactileImage load_image(const std::string& path) {
    std::ifstream is;
    Header h = expect_kind(path, RasterKind::Image, 3, is);
    TactileImage img(int(h.width), int(h.height), load_payload(is, h, path));
    img.validate();
    return img;
}

BinaryMask load_mask(const std::string& path) {
    std::ifstream is;
    Header h = expect_kind(path, RasterKind::Mask, 1, is);
    auto data = load_payload(is, h, path);
    BinaryMask mask(int(h.width), int(h.height));
    for (size_t i = 0; i < data.size(); ++i) mask.data()[i] = data[i] != 0.0f ? 1 : 0;
    return mask;
}

}  // namespace tactilemap
