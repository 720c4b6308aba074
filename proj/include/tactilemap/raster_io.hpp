#pragma once

#include <string>

#include "tactilemap/raster.hpp"

namespace tactilemap {

// Fixed 64-byte header followed by little-endian float32 row-major payload
// (channel-interleaved). Save/load is lossless for all raster types.
//
//   offset  size  field
//   0       6     magic "TMRAST"
//   6       1     format version (1)
//   7       1     kind (1 height um, 2 normal, 3 rgb image, 4 mask)
//   8       4     width  (u32 LE)
//   12      4     height (u32 LE)
//   16      4     channels (u32 LE)
//   20      8     mm_per_pixel (f64 LE)
//   28      36    reserved, zero

enum class RasterKind : uint8_t { Height = 1, Normal = 2, Image = 3, Mask = 4 };

struct RasterInfo {
    RasterKind kind;
    int width;
    int height;
    int channels;
    double mm_per_pixel;
};

RasterInfo peek_raster(const std::string& path);

void save_raster(const std::string& path, const HeightMap& h);
void save_raster(const std::string& path, const NormalMap& n);
void save_raster(const std::string& path, const TactileImage& img);
void save_raster(const std::string& path, const BinaryMask& mask);

HeightMap load_height(const std::string& path);
NormalMap load_normals(const std::string& path);
TactileImage load_image(const std::string& path);
BinaryMask load_mask(const std::string& path);

// PNG import/export for RGB tactile images; 8 or 16 bit, values mapped
// linearly to [0,1].
void save_png(const std::string& path, const TactileImage& img, int bit_depth = 16);
TactileImage load_png(const std::string& path);

}  // namespace tactilemap
