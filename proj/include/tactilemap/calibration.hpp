#pragma once

#include <functional>
#include <string>
#include <vector>

#include "tactilemap/render.hpp"

namespace tactilemap {

struct GridPlan {
    std::vector<std::pair<double, double>> positions;  // (x mm, y mm)
    double indenter_radius_mm = 1.25;

    // 7x7 Cartesian grid over {-4.5,-3,-1.5,0,1.5,3,4.5} in both axes.
    static GridPlan standard(double indenter_radius_mm);
    void validate() const;
};

struct TouchParams {
    double down_step_mm = 0.050;
    double up_step_mm = 0.015;
    int frames_per_reading = 5;
    int crop_px = 300;
    double touch_factor = 1.1;
    double untouch_factor = 0.7;
    double travel_limit_mm = 5.0;  // max descent below the starting z

    void validate() const;
};

struct IndentationSample {
    TactileImage image;
    TactileImage untouched;
    NormalMap gt_normals;
    BinaryMask mask;
    double center_row_px = 0;
    double center_col_px = 0;
    double indenter_radius_px = 0;
    double indenter_radius_mm = 0;
    bool label_source = false;  // the visually-labeled (0,0) frame of each radius
    bool test_split = false;

    void validate() const;
};

// Two-phase contact search. Phase 1: reference statistics from 5 untouched
// frames, then 50 um descent steps until the median MSE against the untouched
// median image exceeds 1.1x the untouched pairwise level. Phase 2: 15 um
// ascent until the MSE falls below 0.7x the final touched level. Returns the
// final z (at most one up-step above true contact).
double detect_touch(VirtualProbe& probe, const TouchParams& params);

// Outward normals of the spherical-cap imprint (sphere pressed to depth R):
// the dimple surface of sphere_imprint. (0,0,1) outside the contact disk; the
// rim annulus is clamped to the 0.999R direction to avoid the nz->0 blowup.
NormalMap gt_normals_for_sphere(double center_row_px, double center_col_px, double radius_px,
                                int width, int height);

// Grid offsets in pixel space: +x maps to +column, +y maps to +row.
std::vector<std::pair<double, double>> propagate_centers(
    double center0_row_px, double center0_col_px, const GridPlan& plan, double mm_per_px,
    int raster_width, int raster_height);

struct DatasetConfig {
    std::vector<double> indenter_radii_mm = {0.5, 0.875, 1.25};
    TouchParams touch;
    double mask_gamma = 0.05;
    double mask_box_margin = 1.25;  // box halfwidth = margin * indenter radius in px
    double test_fraction = 0.10;
    uint64_t seed = 1;
};

// Loss mask: a square of 1s around the indentation plus uniformly random
// outside pixels, so the outside count equals round(gamma * W * H).
BinaryMask build_mask(double center_row_px, double center_col_px, int box_halfwidth_px,
                      double gamma, int width, int height, uint64_t seed);

// Full calibration protocol over a probe factory (one probe per radius):
// detect touch at each grid point, indent by the radius, capture, pair with
// the untouched reference, synthesize gt normals and the loss mask.
std::vector<IndentationSample> build_dataset(
    const std::function<VirtualProbe(double radius_mm)>& make_probe, const GridPlan& plan,
    const DatasetConfig& cfg);

// Mean per-pixel-per-channel squared difference over aligned images.
double image_mse(const TactileImage& a, const TactileImage& b);

}  // namespace tactilemap
