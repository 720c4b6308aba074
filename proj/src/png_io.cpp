#include <png.h>

#include <cmath>
#include <cstdio>
#include <memory>
#include <vector>

#include "tactilemap/raster_io.hpp"

namespace tactilemap {

namespace {

struct FileCloser {
    void operator()(FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<FILE, FileCloser>;

}  // namespace

void save_png(const std::string& path, const TactileImage& img, int bit_depth) {
    require(bit_depth == 8 || bit_depth == 16, ErrorCode::InvalidArgument,
            "png bit depth must be 8 or 16");
    img.validate();
    FilePtr fp(std::fopen(path.c_str(), "wb"));
    require(bool(fp), ErrorCode::IoFailure, "cannot open for writing: " + path);

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    require(png && info, ErrorCode::IoFailure, "libpng init failed");
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        fail(ErrorCode::IoFailure, "png write failed: " + path);
    }
    png_init_io(png, fp.get());
    png_set_IHDR(png, info, png_uint_32(img.width()), png_uint_32(img.height()), bit_depth,
                 PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);

    double scale = bit_depth == 8 ? 255.0 : 65535.0;
    if (bit_depth == 8) {
        std::vector<png_byte> row(size_t(img.width()) * 3);
        for (int r = 0; r < img.height(); ++r) {
            const float* src = img.at(r, 0);
            for (size_t i = 0; i < row.size(); ++i)
                row[i] = png_byte(std::lround(src[i] * scale));
            png_write_row(png, row.data());
        }
    } else {
        std::vector<png_byte> row(size_t(img.width()) * 6);
        for (int r = 0; r < img.height(); ++r) {
            const float* src = img.at(r, 0);
            for (size_t i = 0; i < size_t(img.width()) * 3; ++i) {
                auto v = uint16_t(std::lround(src[i] * scale));
                row[2 * i] = png_byte(v >> 8);  // png is big-endian
                row[2 * i + 1] = png_byte(v & 0xff);
            }
            png_write_row(png, row.data());
        }
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

TactileImage load_png(const std::string& path) {
    FilePtr fp(std::fopen(path.c_str(), "rb"));
    require(bool(fp), ErrorCode::IoFailure, "cannot open: " + path);

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    require(png && info, ErrorCode::IoFailure, "libpng init failed");
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        fail(ErrorCode::CorruptFile, "png read failed: " + path);
    }
    png_init_io(png, fp.get());
    png_read_info(png, info);

    png_uint_32 width = png_get_image_width(png, info);
    png_uint_32 height = png_get_image_height(png, info);
    int depth = png_get_bit_depth(png, info);
    int color = png_get_color_type(png, info);

    // Normalize anything reasonable to RGB.
    if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (color == PNG_COLOR_TYPE_GRAY || color == PNG_COLOR_TYPE_GRAY_ALPHA)
        png_set_gray_to_rgb(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    png_set_strip_alpha(png);
    png_read_update_info(png, info);
    depth = png_get_bit_depth(png, info);

    double scale = depth == 8 ? 1.0 / 255.0 : 1.0 / 65535.0;
    TactileImage img(int(width), int(height));
    std::vector<png_byte> row(size_t(width) * 3 * (depth / 8));
    for (png_uint_32 r = 0; r < height; ++r) {
        png_read_row(png, row.data(), nullptr);
        float* dst = img.at(int(r), 0);
        if (depth == 8) {
            for (size_t i = 0; i < size_t(width) * 3; ++i) dst[i] = float(row[i] * scale);
        } else {
            for (size_t i = 0; i < size_t(width) * 3; ++i) {
                uint16_t v = uint16_t((row[2 * i] << 8) | row[2 * i + 1]);
                dst[i] = float(v * scale);
            }
        }
    }
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return img;
}

}  // namespace tactilemap
