#include "tactilemap/wrinkle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tactilemap/threading.hpp"

namespace tactilemap {

namespace {

constexpr double kPi = 3.14159265358979323846;

double bilinear(const HeightMap& h, double row, double col) {
    int r0 = int(std::floor(row)), c0 = int(std::floor(col));
    r0 = std::clamp(r0, 0, h.height() - 2);
    c0 = std::clamp(c0, 0, h.width() - 2);
    double fr = row - r0, fc = col - c0;
    return (1 - fr) * ((1 - fc) * h.at(r0, c0) + fc * h.at(r0, c0 + 1)) +
           fr * ((1 - fc) * h.at(r0 + 1, c0) + fc * h.at(r0 + 1, c0 + 1));
}

// Scan one line through the raster at unit-step spacing, mark detected
// valleys (peaks of the negated samples) at the nearest pixel.
void scan_line(const HeightMap& h, double row0, double col0, double dr, double dc,
               const WrinkleConfig& cfg, BinaryMask& out) {
    // Clip the parametric line to the raster.
    double tmin = -1e30, tmax = 1e30;
    auto clip = [&](double origin, double dir, double lo, double hi) {
        if (std::abs(dir) < 1e-12) {
            if (origin < lo || origin > hi) tmin = 1e30;
            return;
        }
        double t0 = (lo - origin) / dir, t1 = (hi - origin) / dir;
        if (t0 > t1) std::swap(t0, t1);
        tmin = std::max(tmin, t0);
        tmax = std::min(tmax, t1);
    };
    clip(row0, dr, 0, h.height() - 1);
    clip(col0, dc, 0, h.width() - 1);
    if (tmin >= tmax) return;

    int n = int(std::floor(tmax - tmin)) + 1;
    if (n < 3) return;
    Profile p;
    p.positions_px.resize(size_t(n));
    p.heights_um.resize(size_t(n));
    for (int i = 0; i < n; ++i) {
        double t = tmin + i;
        p.positions_px[size_t(i)] = i;
        p.heights_um[size_t(i)] = bilinear(h, row0 + t * dr, col0 + t * dc);
    }
    PeakConfig pc;
    pc.prominence_min_um = cfg.valley_prominence_um;
    pc.distance_min_px = cfg.valley_distance_px;
    PeaksAndValleys pv = peaks_and_valleys(p, pc);
    for (size_t v : pv.valleys) {
        double t = tmin + double(v);
        int r = int(std::lround(row0 + t * dr));
        int c = int(std::lround(col0 + t * dc));
        if (r >= 0 && r < h.height() && c >= 0 && c < h.width()) out.at(r, c) = 1;
    }
}

}  // namespace

BinaryMask detect_valleys(const HeightMap& h, const WrinkleConfig& cfg) {
    h.validate();
    BinaryMask out(h.width(), h.height());
    for (double angle : cfg.angles_deg) {
        // 0deg is a vertical cut (along rows), 90deg horizontal (along columns).
        double rad = angle * kPi / 180.0;
        double dr = std::cos(rad), dc = std::sin(rad);
        BinaryMask partial(h.width(), h.height());
        if (std::abs(dc) >= std::abs(dr)) {
            if (dc < 0) {
                dr = -dr;
                dc = -dc;
            }
            // One line per integer row-intercept b: starts at (b, 0), unit
            // steps along (dr, dc).
            double slope = dr / dc;
            int b_lo = int(std::floor(std::min(0.0, -slope * (h.width() - 1))));
            int b_hi = int(std::ceil(std::max(double(h.height() - 1),
                                              double(h.height() - 1) - slope * (h.width() - 1))));
            size_t count = size_t(b_hi - b_lo + 1);
            parallel_for(count, [&](size_t i0, size_t i1) {
                for (size_t i = i0; i < i1; ++i)
                    scan_line(h, b_lo + double(i), 0.0, dr, dc, cfg, partial);
            });
        } else {
            if (dr < 0) {
                dr = -dr;
                dc = -dc;
            }
            // Column-intercept lines starting at (0, b).
            double slope = dc / dr;
            int b_lo = int(std::floor(std::min(0.0, -slope * (h.height() - 1))));
            int b_hi = int(std::ceil(std::max(double(h.width() - 1),
                                              double(h.width() - 1) - slope * (h.height() - 1))));
            size_t count = size_t(b_hi - b_lo + 1);
            parallel_for(count, [&](size_t i0, size_t i1) {
                for (size_t i = i0; i < i1; ++i)
                    scan_line(h, 0.0, b_lo + double(i), dr, dc, cfg, partial);
            });
        }
        for (size_t i = 0; i < out.data().size(); ++i) out.data()[i] |= partial.data()[i];
    }
    return out;
}

namespace {

inline int neighborhood(const BinaryMask& m, int r, int c, int* p) {
    // P2..P9 clockwise from north.
    auto get = [&](int rr, int cc) -> int {
        if (rr < 0 || rr >= m.height() || cc < 0 || cc >= m.width()) return 0;
        return m.at(rr, cc) ? 1 : 0;
    };
    p[0] = get(r - 1, c);
    p[1] = get(r - 1, c + 1);
    p[2] = get(r, c + 1);
    p[3] = get(r + 1, c + 1);
    p[4] = get(r + 1, c);
    p[5] = get(r + 1, c - 1);
    p[6] = get(r, c - 1);
    p[7] = get(r - 1, c - 1);
    return p[0] + p[1] + p[2] + p[3] + p[4] + p[5] + p[6] + p[7];
}

inline int transitions(const int* p) {
    int a = 0;
    for (int i = 0; i < 8; ++i) a += (p[i] == 0 && p[(i + 1) % 8] == 1);
    return a;
}

bool thinning_subcycle(BinaryMask& m, int phase) {
    std::vector<std::pair<int, int>> to_clear;
    int p[8];
    for (int r = 0; r < m.height(); ++r) {
        for (int c = 0; c < m.width(); ++c) {
            if (!m.at(r, c)) continue;
            int b = neighborhood(m, r, c, p);
            if (b < 2 || b > 6) continue;
            if (transitions(p) != 1) continue;
            // p[0]=N, p[2]=E, p[4]=S, p[6]=W
            if (phase == 0) {
                if (p[0] && p[2] && p[4]) continue;
                if (p[2] && p[4] && p[6]) continue;
            } else {
                if (p[0] && p[2] && p[6]) continue;
                if (p[0] && p[4] && p[6]) continue;
            }
            to_clear.emplace_back(r, c);
        }
    }
    for (auto [r, c] : to_clear) m.at(r, c) = 0;
    return !to_clear.empty();
}

// Removes one deletable corner from every remaining 2x2 block (staircase
// leftovers). Deletable: clearing it keeps exactly one 0->1 transition
// around it, so local connectivity is preserved.
bool clear_square_blocks(BinaryMask& m) {
    bool changed = false;
    int p[8];
    for (int r = 0; r + 1 < m.height(); ++r) {
        for (int c = 0; c + 1 < m.width(); ++c) {
            if (!(m.at(r, c) && m.at(r, c + 1) && m.at(r + 1, c) && m.at(r + 1, c + 1))) continue;
            const std::pair<int, int> corners[4] = {
                {r, c}, {r, c + 1}, {r + 1, c}, {r + 1, c + 1}};
            for (auto [cr, cc] : corners) {
                neighborhood(m, cr, cc, p);
                if (transitions(p) == 1) {
                    m.at(cr, cc) = 0;
                    changed = true;
                    break;
                }
            }
        }
    }
    return changed;
}

}  // namespace

BinaryMask skeletonize(const BinaryMask& mask) {
    BinaryMask m = mask;
    bool changed = true;
    while (changed) {
        changed = false;
        bool thinning = true;
        while (thinning) {
            bool a = thinning_subcycle(m, 0);
            bool b = thinning_subcycle(m, 1);
            thinning = a || b;
            changed |= thinning;
        }
        changed |= clear_square_blocks(m);
    }
    return m;
}

std::vector<double> estimate_depths(const HeightMap& h, const BinaryMask& skeleton, int n_samples,
                                    int radius_px, uint64_t seed) {
    require(h.width() == skeleton.width() && h.height() == skeleton.height(),
            ErrorCode::DimensionMismatch, "skeleton must align with the height map");
    require(radius_px >= 0, ErrorCode::InvalidArgument, "radius must be non-negative");
    std::vector<uint32_t> pixels;
    for (int r = 0; r < h.height(); ++r)
        for (int c = 0; c < h.width(); ++c)
            if (skeleton.at(r, c)) pixels.push_back(uint32_t(r) * uint32_t(h.width()) + uint32_t(c));
    require(!pixels.empty(), ErrorCode::EmptyResult, "skeleton is empty");

    size_t want = std::min<size_t>(size_t(std::max(0, n_samples)), pixels.size());
    rng::Stream stream(seed);
    for (size_t i = 0; i < want; ++i) {
        size_t j = i + size_t(stream.next_below(pixels.size() - i));
        std::swap(pixels[i], pixels[j]);
    }
    pixels.resize(want);

    // Precompute disk offsets once.
    std::vector<std::pair<int, int>> disk;
    for (int dr = -radius_px; dr <= radius_px; ++dr)
        for (int dc = -radius_px; dc <= radius_px; ++dc)
            if (dr * dr + dc * dc <= radius_px * radius_px) disk.emplace_back(dr, dc);

    std::vector<double> depths(want);
    parallel_for(want, [&](size_t i0, size_t i1) {
        for (size_t i = i0; i < i1; ++i) {
            int r = int(pixels[i]) / h.width();
            int c = int(pixels[i]) % h.width();
            double base = h.at(r, c);
            double peak = base;
            for (auto [dr, dc] : disk) {
                int rr = r + dr, cc = c + dc;
                if (rr < 0 || rr >= h.height() || cc < 0 || cc >= h.width()) continue;
                peak = std::max(peak, double(h.at(rr, cc)));
            }
            depths[i] = peak - base;
        }
    });
    return depths;
}

double percentile_linear(std::vector<double> values, double pct) {
    require(!values.empty(), ErrorCode::EmptyResult, "percentile of empty data");
    require(pct >= 0 && pct <= 100, ErrorCode::InvalidArgument, "percentile must lie in [0,100]");
    std::sort(values.begin(), values.end());
    double pos = pct / 100.0 * double(values.size() - 1);
    size_t lo = size_t(pos);
    double f = pos - double(lo);
    return lo + 1 < values.size() ? (1 - f) * values[lo] + f * values[lo + 1] : values[lo];
}

WrinkleSummary summarize(std::vector<double> depths, double percentile, int bins) {
    require(!depths.empty(), ErrorCode::EmptyResult, "no depths to summarize");
    require(bins >= 1, ErrorCode::InvalidArgument, "bins must be positive");
    WrinkleSummary s;
    s.percentile = percentile;
    s.p_depth_um = percentile_linear(depths, percentile);
    s.mean_um = std::accumulate(depths.begin(), depths.end(), 0.0) / double(depths.size());
    double ss = 0;
    for (double d : depths) ss += (d - s.mean_um) * (d - s.mean_um);
    s.sd_um = depths.size() > 1 ? std::sqrt(ss / double(depths.size() - 1)) : 0.0;

    auto [mn_it, mx_it] = std::minmax_element(depths.begin(), depths.end());
    double lo = *mn_it, hi = *mx_it;
    if (hi == lo) hi = lo + 1.0;  // degenerate all-equal data still bins
    s.bin_edges_um.resize(size_t(bins) + 1);
    for (int b = 0; b <= bins; ++b)
        s.bin_edges_um[size_t(b)] = lo + (hi - lo) * double(b) / double(bins);
    s.density.assign(size_t(bins), 0.0);
    double bin_w = (hi - lo) / double(bins);
    for (double d : depths) {
        int b = std::min(bins - 1, int((d - lo) / bin_w));
        s.density[size_t(std::max(0, b))] += 1.0;
    }
    for (double& v : s.density) v /= double(depths.size()) * bin_w;
    s.depths_um = std::move(depths);
    return s;
}

}  // namespace tactilemap
