#pragma once

#include <cstdint>
#include <vector>

#include "tactilemap/common.hpp"

namespace tactilemap {

// All raster payloads are row-major float32, channel-interleaved. Heights are
// in micrometers; normals are dimensionless unit vectors; image values in [0,1].

struct SensorGeometry {
    int native_width = 3264;   // columns
    int native_height = 2448;  // rows
    int crop_size = 1500;
    int crop_center_row = 1224;
    int crop_center_col = 1482;
    int border_crop = 100;
    double mm_per_pixel = 0.0077;

    void validate() const;

    // Uniformly rescaled geometry for desk-scale runs; physical extent of the
    // crop window is preserved (crop_size * mm_per_pixel constant).
    SensorGeometry scaled_to(int crop) const;
};

class HeightMap {
public:
    HeightMap() = default;
    HeightMap(int width, int height, double mm_per_pixel = 0.0077, float fill = 0.0f);
    HeightMap(int width, int height, std::vector<float> data, double mm_per_pixel = 0.0077);

    int width() const { return width_; }
    int height() const { return height_; }
    double mm_per_pixel() const { return mm_per_pixel_; }
    float at(int row, int col) const { return data_[size_t(row) * width_ + col]; }
    float& at(int row, int col) { return data_[size_t(row) * width_ + col]; }
    const std::vector<float>& data() const { return data_; }
    std::vector<float>& data() { return data_; }

    void validate() const;

private:
    int width_ = 0;
    int height_ = 0;
    double mm_per_pixel_ = 0.0077;
    std::vector<float> data_;
};

class NormalMap {
public:
    NormalMap() = default;
    NormalMap(int width, int height);  // filled with (0,0,1)
    NormalMap(int width, int height, std::vector<float> data);

    int width() const { return width_; }
    int height() const { return height_; }
    const float* at(int row, int col) const { return &data_[(size_t(row) * width_ + col) * 3]; }
    float* at(int row, int col) { return &data_[(size_t(row) * width_ + col) * 3]; }
    void set(int row, int col, float nx, float ny, float nz);
    const std::vector<float>& data() const { return data_; }
    std::vector<float>& data() { return data_; }

    // Unit norm within 1e-6 and nz > 0 everywhere.
    void validate() const;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<float> data_;
};

class TactileImage {
public:
    TactileImage() = default;
    TactileImage(int width, int height, float fill = 0.0f);
    TactileImage(int width, int height, std::vector<float> data);

    int width() const { return width_; }
    int height() const { return height_; }
    static constexpr int channels() { return 3; }
    const float* at(int row, int col) const { return &data_[(size_t(row) * width_ + col) * 3]; }
    float* at(int row, int col) { return &data_[(size_t(row) * width_ + col) * 3]; }
    const std::vector<float>& data() const { return data_; }
    std::vector<float>& data() { return data_; }

    void validate() const;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<float> data_;
};

// Binary raster aligned with a HeightMap (valley masks, loss masks).
class BinaryMask {
public:
    BinaryMask() = default;
    BinaryMask(int width, int height, uint8_t fill = 0);

    int width() const { return width_; }
    int height() const { return height_; }
    uint8_t at(int row, int col) const { return data_[size_t(row) * width_ + col]; }
    uint8_t& at(int row, int col) { return data_[size_t(row) * width_ + col]; }
    const std::vector<uint8_t>& data() const { return data_; }
    std::vector<uint8_t>& data() { return data_; }
    size_t count() const;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<uint8_t> data_;
};

// Extracts the crop_size x crop_size window centered (by index) on
// (crop_center_row, crop_center_col). Pure sub-array copy.
TactileImage crop_center(const TactileImage& img, const SensorGeometry& geom);

}  // namespace tactilemap
