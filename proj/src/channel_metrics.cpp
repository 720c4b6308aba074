#include "tactilemap/channel_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace tactilemap {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

void Profile::validate() const {
    require(positions_px.size() == heights_um.size(), ErrorCode::DimensionMismatch,
            "profile positions and heights must have equal length");
    require(!positions_px.empty(), ErrorCode::InvalidArgument, "profile must be non-empty");
    for (size_t i = 1; i < positions_px.size(); ++i)
        require(positions_px[i] > positions_px[i - 1], ErrorCode::InvalidArgument,
                "profile positions must be strictly increasing");
    for (double v : heights_um)
        require(std::isfinite(v), ErrorCode::InvalidArgument, "profile heights must be finite");
}

std::vector<Profile> straight_sections(const HeightMap& h, int spacing_px,
                                       SectionOrientation orientation) {
    require(spacing_px >= 1, ErrorCode::InvalidArgument, "spacing must be at least 1");
    std::vector<Profile> out;
    if (orientation == SectionOrientation::Rows) {
        for (int r = 0; r < h.height(); r += spacing_px) {
            Profile p;
            p.cut = "row " + std::to_string(r);
            p.positions_px.resize(size_t(h.width()));
            p.heights_um.resize(size_t(h.width()));
            for (int c = 0; c < h.width(); ++c) {
                p.positions_px[size_t(c)] = c;
                p.heights_um[size_t(c)] = h.at(r, c);
            }
            out.push_back(std::move(p));
        }
    } else {
        for (int c = 0; c < h.width(); c += spacing_px) {
            Profile p;
            p.cut = "col " + std::to_string(c);
            p.positions_px.resize(size_t(h.height()));
            p.heights_um.resize(size_t(h.height()));
            for (int r = 0; r < h.height(); ++r) {
                p.positions_px[size_t(r)] = r;
                p.heights_um[size_t(r)] = h.at(r, c);
            }
            out.push_back(std::move(p));
        }
    }
    return out;
}

static double bilinear(const HeightMap& h, double row, double col) {
    int r0 = int(std::floor(row)), c0 = int(std::floor(col));
    r0 = std::clamp(r0, 0, h.height() - 2);
    c0 = std::clamp(c0, 0, h.width() - 2);
    double fr = row - r0, fc = col - c0;
    return (1 - fr) * ((1 - fc) * h.at(r0, c0) + fc * h.at(r0, c0 + 1)) +
           fr * ((1 - fc) * h.at(r0 + 1, c0) + fc * h.at(r0 + 1, c0 + 1));
}

std::vector<Profile> circular_sections(const HeightMap& h, double center_row_px,
                                       double center_col_px, double dtheta_deg) {
    require(center_row_px >= 0 && center_row_px < h.height() && center_col_px >= 0 &&
                center_col_px < h.width(),
            ErrorCode::InvalidArgument, "center must lie inside the raster");
    require(dtheta_deg > 0 && dtheta_deg <= 360, ErrorCode::InvalidArgument,
            "angle increment must lie in (0, 360]");
    std::vector<Profile> out;
    for (double theta = 0.0; theta < 360.0 - 1e-9; theta += dtheta_deg) {
        double rad = theta * kPi / 180.0;
        double dc = std::cos(rad), dr = -std::sin(rad);  // 0deg points along +columns
        Profile p;
        p.cut = "ray " + std::to_string(int(std::lround(theta))) + "deg";
        for (double t = 0.0;; t += 1.0) {
            double row = center_row_px + t * dr, col = center_col_px + t * dc;
            if (row < 0 || row > h.height() - 1 || col < 0 || col > h.width() - 1) break;
            p.positions_px.push_back(t);
            p.heights_um.push_back(bilinear(h, row, col));
        }
        if (p.positions_px.size() >= 2) out.push_back(std::move(p));
    }
    return out;
}

namespace {

// Least-squares polynomial fit evaluated at x_eval; plain normal equations,
// the windows are tiny.
double polyfit_eval(const std::vector<double>& xs, const std::vector<double>& ys, int order,
                    double x_eval) {
    int m = order + 1;
    std::vector<double> ata(size_t(m) * m, 0.0), atb(size_t(m), 0.0);
    for (size_t k = 0; k < xs.size(); ++k) {
        double pow_i = 1.0;
        std::vector<double> powers(size_t(m));
        for (int i = 0; i < m; ++i) {
            powers[size_t(i)] = pow_i;
            pow_i *= xs[k];
        }
        for (int i = 0; i < m; ++i) {
            atb[size_t(i)] += powers[size_t(i)] * ys[k];
            for (int j = 0; j < m; ++j) ata[size_t(i) * m + j] += powers[size_t(i)] * powers[size_t(j)];
        }
    }
    // Gaussian elimination with partial pivoting.
    for (int col = 0; col < m; ++col) {
        int pivot = col;
        for (int r = col + 1; r < m; ++r)
            if (std::abs(ata[size_t(r) * m + col]) > std::abs(ata[size_t(pivot) * m + col])) pivot = r;
        for (int j = 0; j < m; ++j) std::swap(ata[size_t(col) * m + j], ata[size_t(pivot) * m + j]);
        std::swap(atb[size_t(col)], atb[size_t(pivot)]);
        double d = ata[size_t(col) * m + col];
        require(std::abs(d) > 1e-300, ErrorCode::IllPosed, "degenerate polynomial fit");
        for (int r = 0; r < m; ++r) {
            if (r == col) continue;
            double f = ata[size_t(r) * m + col] / d;
            for (int j = col; j < m; ++j) ata[size_t(r) * m + j] -= f * ata[size_t(col) * m + j];
            atb[size_t(r)] -= f * atb[size_t(col)];
        }
    }
    double y = 0.0, pw = 1.0;
    for (int i = 0; i < m; ++i) {
        y += atb[size_t(i)] / ata[size_t(i) * m + i] * pw;
        pw *= x_eval;
    }
    return y;
}

}  // namespace

Profile smooth_profile(const Profile& p, int window, int order) {
    p.validate();
    require(window > 0 && window % 2 == 1, ErrorCode::InvalidArgument, "window must be odd");
    require(window > order && order >= 1, ErrorCode::InvalidArgument,
            "window must exceed the polynomial order");
    int n = int(p.heights_um.size());
    if (n <= order) return p;  // nothing to smooth, fit would be exact anyway

    Profile out = p;
    int half = window / 2;
    std::vector<double> xs, ys;
    for (int i = 0; i < n; ++i) {
        int lo = std::max(0, i - half), hi = std::min(n - 1, i + half);
        xs.clear();
        ys.clear();
        for (int k = lo; k <= hi; ++k) {
            xs.push_back(p.positions_px[size_t(k)] - p.positions_px[size_t(i)]);
            ys.push_back(p.heights_um[size_t(k)]);
        }
        out.heights_um[size_t(i)] = polyfit_eval(xs, ys, order, 0.0);
    }
    return out;
}

double PeakConfig::resolved_prominence(const std::vector<double>& heights) const {
    if (prominence_min_um >= 0) return prominence_min_um;
    std::vector<double> sorted = heights;
    std::sort(sorted.begin(), sorted.end());
    auto quantile = [&](double q) {
        double pos = q * double(sorted.size() - 1);
        size_t lo = size_t(pos);
        double f = pos - double(lo);
        return lo + 1 < sorted.size() ? (1 - f) * sorted[lo] + f * sorted[lo + 1] : sorted[lo];
    };
    return 0.25 * (quantile(0.75) - quantile(0.25));
}

namespace {

// Plateau-aware local maxima: a flat top reports its middle sample.
std::vector<size_t> local_maxima(const std::vector<double>& y) {
    std::vector<size_t> out;
    size_t n = y.size();
    size_t i = 1;
    while (i + 1 < n) {
        if (y[i] > y[i - 1]) {
            size_t j = i;
            while (j + 1 < n && y[j + 1] == y[i]) ++j;
            if (j + 1 < n && y[j + 1] < y[i]) out.push_back((i + j) / 2);
            i = j + 1;
        } else {
            ++i;
        }
    }
    return out;
}

// Prominence: height above the higher of the two bases, where each base is
// the minimum between the peak and the nearest higher point on that side.
double prominence_of(const std::vector<double>& y, size_t peak) {
    double left_base = y[peak], right_base = y[peak];
    for (size_t i = peak; i-- > 0;) {
        if (y[i] > y[peak]) break;
        left_base = std::min(left_base, y[i]);
    }
    for (size_t i = peak + 1; i < y.size(); ++i) {
        if (y[i] > y[peak]) break;
        right_base = std::min(right_base, y[i]);
    }
    return y[peak] - std::max(left_base, right_base);
}

std::vector<size_t> detect_peaks(const std::vector<double>& y, const std::vector<double>& pos,
                                 double min_prominence, double min_distance) {
    std::vector<size_t> cand = local_maxima(y);
    std::vector<size_t> pass;
    for (size_t p : cand)
        if (prominence_of(y, p) >= min_prominence) pass.push_back(p);

    if (min_distance > 0 && pass.size() > 1) {
        // Highest-first greedy suppression, as in standard peak pickers.
        std::vector<size_t> order(pass.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](size_t a, size_t b) { return y[pass[a]] > y[pass[b]]; });
        std::vector<bool> keep(pass.size(), true);
        for (size_t oi : order) {
            if (!keep[oi]) continue;
            for (size_t j = oi; j-- > 0;) {
                if (pos[pass[oi]] - pos[pass[j]] >= min_distance) break;
                keep[j] = false;
            }
            for (size_t j = oi + 1; j < pass.size(); ++j) {
                if (pos[pass[j]] - pos[pass[oi]] >= min_distance) break;
                keep[j] = false;
            }
        }
        std::vector<size_t> kept;
        for (size_t k = 0; k < pass.size(); ++k)
            if (keep[k]) kept.push_back(pass[k]);
        pass = std::move(kept);
    }
    return pass;
}

}  // namespace

PeaksAndValleys peaks_and_valleys(const Profile& p, const PeakConfig& cfg) {
    p.validate();
    require(p.heights_um.size() >= 3, ErrorCode::InvalidArgument,
            "peak detection needs at least 3 samples");
    double prom = cfg.resolved_prominence(p.heights_um);
    double dist = cfg.resolved_distance();
    PeaksAndValleys out;
    out.peaks = detect_peaks(p.heights_um, p.positions_px, prom, dist);
    std::vector<double> neg(p.heights_um.size());
    for (size_t i = 0; i < neg.size(); ++i) neg[i] = -p.heights_um[i];
    out.valleys = detect_peaks(neg, p.positions_px, prom, dist);
    return out;
}

DepthStats depth_stats(const std::vector<Profile>& profiles, const DepthConfig& cfg,
                       std::vector<DepthSample>* detail) {
    require(!profiles.empty(), ErrorCode::InvalidArgument, "need at least one profile");
    std::vector<double> depths;
    for (size_t pi = 0; pi < profiles.size(); ++pi) {
        if (profiles[pi].heights_um.size() < 3) continue;
        Profile sm = smooth_profile(profiles[pi], cfg.savgol_window, cfg.savgol_order);
        PeaksAndValleys pv = peaks_and_valleys(sm, cfg.peaks);
        if (pv.peaks.empty() || pv.valleys.empty()) continue;
        size_t pair_idx = 0;
        for (size_t v : pv.valleys) {
            // Adjacent peak on each side, in index order.
            auto it = std::upper_bound(pv.peaks.begin(), pv.peaks.end(), v);
            if (it != pv.peaks.begin()) {
                double d = std::abs(sm.heights_um[*(it - 1)] - sm.heights_um[v]);
                depths.push_back(d);
                if (detail) detail->push_back({pi, pair_idx++, d});
            }
            if (it != pv.peaks.end()) {
                double d = std::abs(sm.heights_um[*it] - sm.heights_um[v]);
                depths.push_back(d);
                if (detail) detail->push_back({pi, pair_idx++, d});
            }
        }
    }
    require(!depths.empty(), ErrorCode::EmptyResult, "no peak-valley pairs found");
    DepthStats stats;
    stats.n_pairs = depths.size();
    stats.mean_um = std::accumulate(depths.begin(), depths.end(), 0.0) / double(depths.size());
    double ss = 0.0;
    for (double d : depths) ss += (d - stats.mean_um) * (d - stats.mean_um);
    stats.sd_um = depths.size() > 1 ? std::sqrt(ss / double(depths.size() - 1)) : 0.0;
    return stats;
}

Agreement agreement(const std::vector<double>& x, const std::vector<double>& y) {
    require(x.size() == y.size(), ErrorCode::DimensionMismatch, "vectors must have equal length");
    require(x.size() >= 2, ErrorCode::InvalidArgument, "need at least two pairs");
    size_t n = x.size();
    Agreement a;

    double mx = std::accumulate(x.begin(), x.end(), 0.0) / double(n);
    double my = std::accumulate(y.begin(), y.end(), 0.0) / double(n);
    double ss_res = 0, ss_tot = 0, sxx = 0, syy = 0, sxy = 0;
    for (size_t i = 0; i < n; ++i) {
        a.mae += std::abs(x[i] - y[i]);
        ss_res += (y[i] - x[i]) * (y[i] - x[i]);
        ss_tot += (y[i] - my) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    a.mae /= double(n);
    a.r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : (ss_res == 0 ? 1.0 : 0.0);
    a.r2_pearson = (sxx > 0 && syy > 0) ? (sxy * sxy) / (sxx * syy) : 1.0;

    // Two-way ANOVA decomposition with raters = {x, y}.
    double k = 2.0, nn = double(n);
    double grand = (mx + my) / 2.0;
    double ssr = 0;
    for (size_t i = 0; i < n; ++i) {
        double rm = (x[i] + y[i]) / 2.0;
        ssr += (rm - grand) * (rm - grand);
    }
    ssr *= k;
    double ssc = nn * ((mx - grand) * (mx - grand) + (my - grand) * (my - grand));
    double sst = 0;
    for (size_t i = 0; i < n; ++i)
        sst += (x[i] - grand) * (x[i] - grand) + (y[i] - grand) * (y[i] - grand);
    double sse = sst - ssr - ssc;
    double msr = ssr / (nn - 1);
    double msc = ssc / (k - 1);
    double mse = sse / ((nn - 1) * (k - 1));
    double denom_c = msr + (k - 1) * mse;
    a.icc = denom_c > 0 ? (msr - mse) / denom_c : 1.0;
    double denom_a = msr + (k - 1) * mse + (k / nn) * (msc - mse);
    a.icc_agreement = denom_a > 0 ? (msr - mse) / denom_a : 1.0;
    return a;
}

}  // namespace tactilemap
