#include "tactilemap/raster.hpp"

#include <cmath>
#include <numeric>

#include "tactilemap/common.hpp"

namespace tactilemap {

void SensorGeometry::validate() const {
    require(native_width > 0 && native_height > 0 && crop_size > 0, ErrorCode::InvalidArgument,
            "geometry dimensions must be positive");
    require(mm_per_pixel > 0, ErrorCode::InvalidArgument, "mm_per_pixel must be positive");
    int half = crop_size / 2;
    bool inside = crop_center_row - half >= 0 && crop_center_col - half >= 0 &&
                  crop_center_row - half + crop_size <= native_height &&
                  crop_center_col - half + crop_size <= native_width;
    require(inside, ErrorCode::InvalidArgument, "crop window must lie inside the native frame");
    require(border_crop >= 0 && border_crop < crop_size / 2, ErrorCode::InvalidArgument,
            "border_crop must be below crop_size/2");
}

SensorGeometry SensorGeometry::scaled_to(int crop) const {
    require(crop > 0, ErrorCode::InvalidArgument, "crop must be positive");
    double s = double(crop_size) / crop;
    SensorGeometry g;
    g.crop_size = crop;
    g.native_width = int(std::lround(native_width / s));
    g.native_height = int(std::lround(native_height / s));
    g.crop_center_row = int(std::lround(crop_center_row / s));
    g.crop_center_col = int(std::lround(crop_center_col / s));
    g.border_crop = int(std::lround(border_crop / s));
    g.mm_per_pixel = mm_per_pixel * s;
    // Rounding can push the window against the frame edge; nudge the center back in.
    int half = g.crop_size / 2;
    if (g.crop_center_row - half < 0) g.crop_center_row = half;
    if (g.crop_center_col - half < 0) g.crop_center_col = half;
    if (g.crop_center_row - half + g.crop_size > g.native_height)
        g.crop_center_row = g.native_height - g.crop_size + half;
    if (g.crop_center_col - half + g.crop_size > g.native_width)
        g.crop_center_col = g.native_width - g.crop_size + half;
    g.validate();
    return g;
}

static void check_dims(int width, int height, size_t len, int channels) {
    require(width > 0 && height > 0, ErrorCode::InvalidArgument, "raster dimensions must be positive");
    require(len == size_t(width) * height * channels, ErrorCode::DimensionMismatch,
            "raster payload length does not match dimensions");
}

HeightMap::HeightMap(int width, int height, double mm_per_pixel, float fill)
    : width_(width), height_(height), mm_per_pixel_(mm_per_pixel),
      data_(size_t(width) * height, fill) {
    require(width > 0 && height > 0, ErrorCode::InvalidArgument, "raster dimensions must be positive");
    require(mm_per_pixel > 0, ErrorCode::InvalidArgument, "mm_per_pixel must be positive");
}

HeightMap::HeightMap(int width, int height, std::vector<float> data, double mm_per_pixel)
    : width_(width), height_(height), mm_per_pixel_(mm_per_pixel), data_(std::move(data)) {
    check_dims(width, height, data_.size(), 1);
    require(mm_per_pixel > 0, ErrorCode::InvalidArgument, "mm_per_pixel must be positive");
}

void HeightMap::validate() const {
    check_dims(width_, height_, data_.size(), 1);
    require(mm_per_pixel_ > 0, ErrorCode::InvalidArgument, "mm_per_pixel must be positive");
    for (float v : data_)
        require(std::isfinite(v), ErrorCode::InvalidArgument, "height values must be finite");
}

NormalMap::NormalMap(int width, int height)
    : width_(width), height_(height), data_(size_t(width) * height * 3, 0.0f) {
    require(width > 0 && height > 0, ErrorCode::InvalidArgument, "raster dimensions must be positive");
    for (size_t i = 2; i < data_.size(); i += 3) data_[i] = 1.0f;
}

NormalMap::NormalMap(int width, int height, std::vector<float> data)
    : width_(width), height_(height), data_(std::move(data)) {
    check_dims(width, height, data_.size(), 3);
}

void NormalMap::set(int row, int col, float nx, float ny, float nz) {
    float* p = at(row, col);
    p[0] = nx;
    p[1] = ny;
    p[2] = nz;
}

void NormalMap::validate() const {
    check_dims(width_, height_, data_.size(), 3);
    for (size_t i = 0; i < data_.size(); i += 3) {
        double n2 = double(data_[i]) * data_[i] + double(data_[i + 1]) * data_[i + 1] +
                    double(data_[i + 2]) * data_[i + 2];
        require(std::isfinite(n2) && std::abs(n2 - 1.0) <= 2e-6, ErrorCode::InvalidArgument,
                "normals must have unit L2 norm");
        require(data_[i + 2] > 0.0f, ErrorCode::InvalidArgument,
                "normals must face up (nz > 0) for a height field");
    }
}

TactileImage::TactileImage(int width, int height, float fill)
    : width_(width), height_(height), data_(size_t(width) * height * 3, fill) {
    require(width > 0 && height > 0, ErrorCode::InvalidArgument, "raster dimensions must be positive");
}

TactileImage::TactileImage(int width, int height, std::vector<float> data)
    : width_(width), height_(height), data_(std::move(data)) {
    check_dims(width, height, data_.size(), 3);
}

void TactileImage::validate() const {
    check_dims(width_, height_, data_.size(), 3);
    for (float v : data_)
        require(v >= 0.0f && v <= 1.0f, ErrorCode::InvalidArgument, "image values must lie in [0,1]");
}

BinaryMask::BinaryMask(int width, int height, uint8_t fill)
    : width_(width), height_(height), data_(size_t(width) * height, fill) {
    require(width > 0 && height > 0, ErrorCode::InvalidArgument, "raster dimensions must be positive");
}

size_t BinaryMask::count() const {
    size_t n = 0;
    for (uint8_t v : data_) n += (v != 0);
    return n;
}

TactileImage crop_center(const TactileImage& img, const SensorGeometry& geom) {
    geom.validate();
    require(img.width() == geom.native_width && img.height() == geom.native_height,
            ErrorCode::DimensionMismatch, "image dimensions do not match sensor geometry");
    int half = geom.crop_size / 2;
    int row0 = geom.crop_center_row - half;
    int col0 = geom.crop_center_col - half;
    TactileImage out(geom.crop_size, geom.crop_size);
    for (int r = 0; r < geom.crop_size; ++r) {
        const float* src = img.at(row0 + r, col0);
        float* dst = out.at(r, 0);
        std::copy(src, src + size_t(geom.crop_size) * 3, dst);
    }
    return out;
}

}  // namespace tactilemap
