#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tactilemap/raster.hpp"

namespace tactilemap {

struct Profile {
    std::vector<double> positions_px;  // strictly increasing
    std::vector<double> heights_um;
    std::string cut;  // e.g. "row 400", "ray 15deg"

    void validate() const;
};

enum class SectionOrientation { Rows, Columns };

// Rows (or columns) sampled every spacing_px, starting at index 0.
std::vector<Profile> straight_sections(const HeightMap& h, int spacing_px = 100,
                                       SectionOrientation orientation = SectionOrientation::Rows);

// Radial rays from the center at dtheta increments, bilinearly interpolated
// at unit steps out to the raster edge.
std::vector<Profile> circular_sections(const HeightMap& h, double center_row_px,
                                       double center_col_px, double dtheta_deg = 15.0);

// Savitzky-Golay least-squares polynomial smoothing. Positions within a
// half-window of either end are fitted on the truncated window.
Profile smooth_profile(const Profile& p, int window, int order = 3);

struct PeakConfig {
    // Negative values select the defaults: prominence = 25% of the profile's
    // interquartile height range, distance = 20 px (or half the expected
    // channel width when the caller knows it).
    double prominence_min_um = -1.0;
    double distance_min_px = -1.0;

    double resolved_prominence(const std::vector<double>& heights) const;
    double resolved_distance() const { return distance_min_px >= 0 ? distance_min_px : 20.0; }
};

struct PeaksAndValleys {
    std::vector<size_t> peaks;
    std::vector<size_t> valleys;
};

// Peaks are local maxima passing prominence and minimum-separation filters;
// valleys are peaks of the negated profile under the same parameters.
PeaksAndValleys peaks_and_valleys(const Profile& p, const PeakConfig& cfg = {});

struct DepthStats {
    double mean_um = 0;
    double sd_um = 0;
    size_t n_pairs = 0;
};

struct DepthConfig {
    int savgol_window = 31;
    int savgol_order = 3;
    PeakConfig peaks;
};

struct DepthSample {
    size_t profile_index;
    size_t pair_index;
    double depth_um;
};

// Smooths each profile, pairs every valley with its adjacent peaks, and
// aggregates |h_peak - h_valley| over all profiles. sd uses the n-1
// denominator (single pair -> sd 0).
DepthStats depth_stats(const std::vector<Profile>& profiles, const DepthConfig& cfg,
                       std::vector<DepthSample>* detail = nullptr);

struct Agreement {
    double mae = 0;
    double r2 = 0;          // against the identity line y = x
    double r2_pearson = 0;  // squared Pearson correlation
    double icc = 0;         // two-way mixed, consistency, single measure
    double icc_agreement = 0;  // two-way random, absolute agreement, single measure
};

Agreement agreement(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace tactilemap
