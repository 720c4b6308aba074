#pragma once

#include <vector>

#include "tactilemap/common.hpp"

namespace tactilemap::net {

// Row-major H x W x C field, channel-interleaved.
template <typename T>
struct Plane {
    int height = 0;
    int width = 0;
    int channels = 0;
    std::vector<T> data;

    Plane() = default;
    Plane(int h, int w, int c) : height(h), width(w), channels(c), data(size_t(h) * w * c, T(0)) {}

    T* at(int r, int c) { return &data[(size_t(r) * width + c) * channels]; }
    const T* at(int r, int c) const { return &data[(size_t(r) * width + c) * channels]; }
    size_t pixels() const { return size_t(height) * width; }
    size_t size() const { return data.size(); }

    template <typename U>
    Plane<U> cast() const {
        Plane<U> out(height, width, channels);
        for (size_t i = 0; i < data.size(); ++i) out.data[i] = U(data[i]);
        return out;
    }
};

// C = alpha * op(A) * op(B) + beta * C, row-major.
void gemm(bool trans_a, bool trans_b, int m, int n, int k, float alpha, const float* a, int lda,
          const float* b, int ldb, float beta, float* c, int ldc);
void gemm(bool trans_a, bool trans_b, int m, int n, int k, double alpha, const double* a, int lda,
          const double* b, int ldb, double beta, double* c, int ldc);

}  // namespace tactilemap::net
