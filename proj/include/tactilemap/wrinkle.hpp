#pragma once

#include <vector>

#include "tactilemap/channel_metrics.hpp"
#include "tactilemap/raster.hpp"

namespace tactilemap {

struct WrinkleConfig {
    std::vector<double> angles_deg = {-60, -30, 0, 30, 60, 90};
    // 1 um default suppresses numerical ripple left over from detrending.
    double valley_prominence_um = 1.0;
    double valley_distance_px = 3.0;
    int n_samples = 10000;
    int peak_radius_px = 30;
    int histogram_bins = 50;
    double percentile = 80.0;
};

// Valley candidates from exhaustive line scans: every offset line at each
// angle is processed once and all its detected valleys are marked. Equivalent
// to running a per-pixel angled-cut scan, at O(angles * N^2).
BinaryMask detect_valleys(const HeightMap& h, const WrinkleConfig& cfg = {});

// Zhang-Suen two-subcycle thinning iterated to a global fixpoint, plus a
// final staircase cleanup so no 2x2 block survives. Idempotent; never adds
// pixels.
BinaryMask skeletonize(const BinaryMask& mask);

// Depth of each sampled skeleton pixel: highest point of h within the disk
// radius minus the pixel's own height. Sampling is uniform without
// replacement (all pixels when the skeleton is small).
std::vector<double> estimate_depths(const HeightMap& h, const BinaryMask& skeleton, int n_samples,
                                    int radius_px, uint64_t seed);

struct WrinkleSummary {
    std::vector<double> depths_um;
    double percentile = 80.0;
    double p_depth_um = 0;  // the requested percentile (linear interpolation)
    double mean_um = 0;
    double sd_um = 0;
    std::vector<double> bin_edges_um;
    std::vector<double> density;  // normalized so the histogram integrates to 1
};

WrinkleSummary summarize(std::vector<double> depths, double percentile = 80.0, int bins = 50);

// Linear-interpolation percentile of unsorted data.
double percentile_linear(std::vector<double> values, double pct);

}  // namespace tactilemap
