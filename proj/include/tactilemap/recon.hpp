#pragma once

#include "tactilemap/raster.hpp"

namespace tactilemap {

struct ReconConfig {
    double cutoff_cycles_per_px = 0.002;
    int border_crop_px = 100;
    double mm_per_pixel = 0.0077;
    // Discrete-Laplacian-consistent spectral symbols instead of the ideal
    // derivative symbols; equivalent at low frequency, kept as a toggle.
    bool discrete_symbols = false;

    void validate() const;
};

// Least-squares height from surface normals under periodic boundary
// conditions: gradients p = -nx/nz, q = -ny/nz (scaled by the pixel pitch to
// um per pixel step), solved spectrally with the DC term pinned to zero.
HeightMap integrate_normals(const NormalMap& normals, double mm_per_pixel,
                            bool discrete_symbols = false);

// Ideal radial high-pass: zeroes every Fourier component with
// sqrt(fx^2 + fy^2) < cutoff (cycles/pixel), DC included; all other
// components pass bit-near-exactly.
HeightMap highpass_detrend(const HeightMap& h, double cutoff_cycles_per_px);

HeightMap crop_border(const HeightMap& h, int border_px);

}  // namespace tactilemap
