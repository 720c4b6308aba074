#include "tactilemap/recon.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <mutex>
#include <vector>

namespace tactilemap {

namespace {

constexpr double kPi = 3.14159265358979323846;

// FFTW planning is not thread-safe; execution of independent plans is.
std::mutex& fftw_mutex() {
    static std::mutex m;
    return m;
}

struct Fft2d {
    int w, h;
    fftw_plan fwd, inv;
    std::vector<std::complex<double>> buf;

    Fft2d(int width, int height) : w(width), h(height), buf(size_t(width) * height) {
        std::lock_guard<std::mutex> lock(fftw_mutex());
        auto* p = reinterpret_cast<fftw_complex*>(buf.data());
        fwd = fftw_plan_dft_2d(h, w, p, p, FFTW_FORWARD, FFTW_ESTIMATE);
        inv = fftw_plan_dft_2d(h, w, p, p, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    ~Fft2d() {
        std::lock_guard<std::mutex> lock(fftw_mutex());
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(inv);
    }
    Fft2d(const Fft2d&) = delete;
    Fft2d& operator=(const Fft2d&) = delete;

    void forward() { fftw_execute(fwd); }
    void inverse() { fftw_execute(inv); }  // unnormalized
};

// Signed frequency index in (-N/2, N/2].
inline int signed_index(int k, int n) { return k <= n / 2 ? k : k - n; }

}  // namespace

void ReconConfig::validate() const {
    require(cutoff_cycles_per_px > 0 && cutoff_cycles_per_px < 0.5, ErrorCode::InvalidArgument,
            "cutoff must lie in (0, 0.5) cycles/pixel");
    require(border_crop_px >= 0, ErrorCode::InvalidArgument, "border crop must be non-negative");
    require(mm_per_pixel > 0, ErrorCode::InvalidArgument, "mm_per_pixel must be positive");
}

HeightMap integrate_normals(const NormalMap& normals, double mm_per_pixel,
                            bool discrete_symbols) {
    require(mm_per_pixel > 0, ErrorCode::InvalidArgument, "mm_per_pixel must be positive");
    int w = normals.width(), h = normals.height();
    const auto& data = normals.data();
    for (size_t i = 2; i < data.size(); i += 3)
        require(data[i] > 0.0f, ErrorCode::InvalidArgument,
                "normals must have nz > 0 for integration");

    double pitch_um = mm_per_pixel * 1000.0;
    Fft2d fp(w, h), fq(w, h);
    for (size_t i = 0, n = size_t(w) * h; i < n; ++i) {
        double nx = data[3 * i], ny = data[3 * i + 1], nz = data[3 * i + 2];
        fp.buf[i] = -double(nx) / nz * pitch_um;  // um of height per pixel step
        fq.buf[i] = -double(ny) / nz * pitch_um;
    }
    fp.forward();
    fq.forward();

    for (int ky = 0; ky < h; ++ky) {
        for (int kx = 0; kx < w; ++kx) {
            size_t i = size_t(ky) * w + kx;
            if (kx == 0 && ky == 0) {
                fp.buf[0] = 0.0;  // zero-mean convention
                continue;
            }
            std::complex<double> wx, wy;
            double denom;
            if (discrete_symbols) {
                // Symbols of the central-difference operator.
                double sx = std::sin(2.0 * kPi * signed_index(kx, w) / w);
                double sy = std::sin(2.0 * kPi * signed_index(ky, h) / h);
                wx = {0.0, sx};
                wy = {0.0, sy};
                denom = sx * sx + sy * sy;
            } else {
                double ox = 2.0 * kPi * signed_index(kx, w) / w;
                double oy = 2.0 * kPi * signed_index(ky, h) / h;
                wx = {0.0, ox};
                wy = {0.0, oy};
                denom = ox * ox + oy * oy;
            }
            if (denom == 0.0) {
                fp.buf[i] = 0.0;
                continue;
            }
            fp.buf[i] = (-wx * fp.buf[i] - wy * fq.buf[i]) / denom;
        }
    }
    fp.inverse();

    HeightMap out(w, h, mm_per_pixel);
    double scale = 1.0 / (double(w) * h);
    for (size_t i = 0, n = size_t(w) * h; i < n; ++i)
        out.data()[i] = float(fp.buf[i].real() * scale);
    return out;
}

HeightMap highpass_detrend(const HeightMap& h, double cutoff_cycles_per_px) {
    require(cutoff_cycles_per_px > 0 && cutoff_cycles_per_px < 0.5, ErrorCode::InvalidArgument,
            "cutoff must lie in (0, 0.5) cycles/pixel");
    int w = h.width(), hh = h.height();
    Fft2d fft(w, hh);
    for (size_t i = 0, n = size_t(w) * hh; i < n; ++i) fft.buf[i] = double(h.data()[i]);
    fft.forward();

    double cut2 = cutoff_cycles_per_px * cutoff_cycles_per_px;
    for (int ky = 0; ky < hh; ++ky) {
        double fy = double(signed_index(ky, hh)) / hh;
        for (int kx = 0; kx < w; ++kx) {
            double fx = double(signed_index(kx, w)) / w;
            if (fx * fx + fy * fy < cut2) fft.buf[size_t(ky) * w + kx] = 0.0;
        }
    }
    fft.inverse();

    HeightMap out(w, hh, h.mm_per_pixel());
    double scale = 1.0 / (double(w) * hh);
    for (size_t i = 0, n = size_t(w) * hh; i < n; ++i)
        out.data()[i] = float(fft.buf[i].real() * scale);
    return out;
}

HeightMap crop_border(const HeightMap& h, int border_px) {
    require(border_px >= 0, ErrorCode::InvalidArgument, "border must be non-negative");
    int w = h.width() - 2 * border_px, hh = h.height() - 2 * border_px;
    require(w > 0 && hh > 0, ErrorCode::InvalidArgument, "border crop leaves no pixels");
    HeightMap out(w, hh, h.mm_per_pixel());
    for (int r = 0; r < hh; ++r)
        for (int c = 0; c < w; ++c) out.at(r, c) = h.at(r + border_px, c + border_px);
    return out;
}

}  // namespace tactilemap
