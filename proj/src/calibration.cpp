#include "tactilemap/calibration.hpp"

#include <algorithm>
#include <cmath>

namespace tactilemap {

GridPlan GridPlan::standard(double indenter_radius_mm) {
    GridPlan plan;
    plan.indenter_radius_mm = indenter_radius_mm;
    const double coords[7] = {-4.5, -3.0, -1.5, 0.0, 1.5, 3.0, 4.5};
    for (double x : coords)
        for (double y : coords) plan.positions.emplace_back(x, y);
    return plan;
}

void GridPlan::validate() const {
    require(!positions.empty(), ErrorCode::InvalidArgument, "grid plan must have positions");
    require(indenter_radius_mm > 0, ErrorCode::InvalidArgument, "indenter radius must be positive");
}

void TouchParams::validate() const {
    require(down_step_mm > 0 && up_step_mm > 0 && up_step_mm < down_step_mm,
            ErrorCode::InvalidArgument, "steps must be positive with up_step < down_step");
    require(frames_per_reading >= 1 && crop_px >= 1, ErrorCode::InvalidArgument,
            "frames and crop must be positive");
    require(touch_factor > 1.0 && untouch_factor > 0.0 && untouch_factor < 1.0,
            ErrorCode::InvalidArgument, "thresholds: touch_factor > 1, untouch_factor in (0,1)");
    require(travel_limit_mm > 0, ErrorCode::InvalidArgument, "travel limit must be positive");
}

void IndentationSample::validate() const {
    image.validate();
    untouched.validate();
    gt_normals.validate();
    bool same = image.width() == untouched.width() && image.height() == untouched.height() &&
                image.width() == gt_normals.width() && image.height() == gt_normals.height() &&
                image.width() == mask.width() && image.height() == mask.height();
    require(same, ErrorCode::DimensionMismatch, "sample rasters must share dimensions");
    require(indenter_radius_px > 0, ErrorCode::InvalidArgument, "indenter radius must be positive");
}

double image_mse(const TactileImage& a, const TactileImage& b) {
    require(a.width() == b.width() && a.height() == b.height(), ErrorCode::DimensionMismatch,
            "MSE requires matching dimensions");
    double acc = 0.0;
    const auto& da = a.data();
    const auto& db = b.data();
    for (size_t i = 0; i < da.size(); ++i) {
        double d = double(da[i]) - db[i];
        acc += d * d;
    }
    return acc / double(da.size());
}

namespace {

TactileImage crop_window(const TactileImage& img, double center_row, double center_col, int crop) {
    int w = img.width(), h = img.height();
    crop = std::min({crop, w, h});
    int r0 = std::clamp(int(std::lround(center_row)) - crop / 2, 0, h - crop);
    int c0 = std::clamp(int(std::lround(center_col)) - crop / 2, 0, w - crop);
    TactileImage out(crop, crop);
    for (int r = 0; r < crop; ++r) {
        const float* src = img.at(r0 + r, c0);
        std::copy(src, src + size_t(crop) * 3, out.at(r, 0));
    }
    return out;
}

TactileImage pixel_median(const std::vector<TactileImage>& frames) {
    TactileImage out(frames[0].width(), frames[0].height());
    size_t n = frames[0].data().size();
    std::vector<float> vals(frames.size());
    for (size_t i = 0; i < n; ++i) {
        for (size_t f = 0; f < frames.size(); ++f) vals[f] = frames[f].data()[i];
        std::nth_element(vals.begin(), vals.begin() + vals.size() / 2, vals.end());
        float hi = vals[vals.size() / 2];
        if (vals.size() % 2 == 0) {
            float lo = *std::max_element(vals.begin(), vals.begin() + vals.size() / 2);
            hi = (hi + lo) / 2.0f;
        }
        out.data()[i] = hi;
    }
    return out;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

struct TouchReference {
    TactileImage untouched_median;
    double touch_threshold;
};

double reading_mse(VirtualProbe& probe, const TouchParams& p, const TactileImage& reference) {
    std::vector<double> errs;
    errs.reserve(size_t(p.frames_per_reading));
    for (int i = 0; i < p.frames_per_reading; ++i) {
        TactileImage crop =
            crop_window(probe.capture(), probe.center_row_px(), probe.center_col_px(), p.crop_px);
        errs.push_back(image_mse(crop, reference));
    }
    return median(errs);
}

TouchReference untouched_reference(VirtualProbe& probe, const TouchParams& p) {
    std::vector<TactileImage> crops;
    for (int i = 0; i < p.frames_per_reading; ++i)
        crops.push_back(
            crop_window(probe.capture(), probe.center_row_px(), probe.center_col_px(), p.crop_px));
    std::vector<double> pair_errs;
    for (size_t i = 0; i < crops.size(); ++i)
        for (size_t j = i + 1; j < crops.size(); ++j) pair_errs.push_back(image_mse(crops[i], crops[j]));
    double e_untouched = pair_errs.empty() ? 0.0 : median(pair_errs);
    return {pixel_median(crops), p.touch_factor * e_untouched};
}

}  // namespace

double detect_touch(VirtualProbe& probe, const TouchParams& params) {
    params.validate();
    require(probe.depth_mm() == 0.0, ErrorCode::InvalidArgument,
            "probe must start above the surface");
    TouchReference ref = untouched_reference(probe, params);

    double start_z = probe.z();
    double e_final = 0.0;
    bool touched = false;
    while (probe.z() > start_z - params.travel_limit_mm) {
        probe.step_z(-params.down_step_mm);
        double e_curr = reading_mse(probe, params, ref.untouched_median);
        if (e_curr > ref.touch_threshold) {
            e_final = e_curr;
            touched = true;
            break;
        }
    }
    require(touched, ErrorCode::NoContact, "no contact within travel limit");

    double untouch_threshold = params.untouch_factor * e_final;
    while (true) {
        probe.step_z(params.up_step_mm);
        double e_curr = reading_mse(probe, params, ref.untouched_median);
        if (e_curr < untouch_threshold) break;
        require(probe.z() < start_z + params.travel_limit_mm, ErrorCode::NoContact,
                "untouch search exceeded travel limit");
    }
    return probe.z();
}

NormalMap gt_normals_for_sphere(double center_row_px, double center_col_px, double radius_px,
                                int width, int height) {
    require(radius_px > 0, ErrorCode::InvalidArgument, "radius must be positive");
    require(center_row_px >= 0 && center_row_px < height && center_col_px >= 0 &&
                center_col_px < width,
            ErrorCode::InvalidArgument, "center must lie inside the raster");
    NormalMap out(width, height);
    double R = radius_px;
    double rim = 0.999 * R;
    for (int r = 0; r < height; ++r) {
        double dy = r - center_row_px;
        for (int c = 0; c < width; ++c) {
            double dx = c - center_col_px;
            double rho = std::sqrt(dx * dx + dy * dy);
            if (rho > R || rho == 0.0) continue;  // leave the default (0,0,1)
            double eff = std::min(rho, rim);
            double sx = dx / rho * eff, sy = dy / rho * eff;
            // Dimple surface: tilts toward the indentation axis.
            double nx = -sx / R, ny = -sy / R;
            double nz = std::sqrt(std::max(0.0, 1.0 - (eff * eff) / (R * R)));
            double inv = 1.0 / std::sqrt(nx * nx + ny * ny + nz * nz);
            out.set(r, c, float(nx * inv), float(ny * inv), float(nz * inv));
        }
    }
    return out;
}

std::vector<std::pair<double, double>> propagate_centers(
    double center0_row_px, double center0_col_px, const GridPlan& plan, double mm_per_px,
    int raster_width, int raster_height) {
    plan.validate();
    require(mm_per_px > 0, ErrorCode::InvalidArgument, "mm_per_px must be positive");
    std::vector<std::pair<double, double>> centers;
    std::string offenders;
    for (size_t i = 0; i < plan.positions.size(); ++i) {
        auto [x_mm, y_mm] = plan.positions[i];
        double row = center0_row_px + y_mm / mm_per_px;
        double col = center0_col_px + x_mm / mm_per_px;
        if (row < 0 || row >= raster_height || col < 0 || col >= raster_width)
            offenders += (offenders.empty() ? "" : ",") + std::to_string(i);
        centers.emplace_back(row, col);
    }
    require(offenders.empty(), ErrorCode::OutOfFrame,
            "propagated centers fall outside the raster at indices: " + offenders);
    return centers;
}

BinaryMask build_mask(double center_row_px, double center_col_px, int box_halfwidth_px,
                      double gamma, int width, int height, uint64_t seed) {
    require(gamma >= 0.0 && gamma < 1.0, ErrorCode::InvalidArgument, "gamma must lie in [0,1)");
    int r0 = int(std::lround(center_row_px)) - box_halfwidth_px;
    int r1 = int(std::lround(center_row_px)) + box_halfwidth_px;
    int c0 = int(std::lround(center_col_px)) - box_halfwidth_px;
    int c1 = int(std::lround(center_col_px)) + box_halfwidth_px;
    require(r0 >= 0 && c0 >= 0 && r1 < height && c1 < width, ErrorCode::InvalidArgument,
            "mask box must lie inside the raster");
    BinaryMask mask(width, height);
    for (int r = r0; r <= r1; ++r)
        for (int c = c0; c <= c1; ++c) mask.at(r, c) = 1;

    size_t want_outside = size_t(std::llround(gamma * double(width) * double(height)));
    std::vector<uint32_t> outside;
    outside.reserve(size_t(width) * height - mask.count());
    for (int r = 0; r < height; ++r)
        for (int c = 0; c < width; ++c)
            if (!mask.at(r, c)) outside.push_back(uint32_t(r * width + c));
    want_outside = std::min(want_outside, outside.size());

    // Partial Fisher-Yates: first want_outside entries are a uniform sample.
    rng::Stream stream(seed);
    for (size_t i = 0; i < want_outside; ++i) {
        size_t j = i + size_t(stream.next_below(outside.size() - i));
        std::swap(outside[i], outside[j]);
        mask.data()[outside[i]] = 1;
    }
    return mask;
}

std::vector<IndentationSample> build_dataset(
    const std::function<VirtualProbe(double radius_mm)>& make_probe, const GridPlan& plan,
    const DatasetConfig& cfg) {
    plan.validate();
    cfg.touch.validate();
    std::vector<IndentationSample> samples;

    for (double radius_mm : cfg.indenter_radii_mm) {
        VirtualProbe probe = make_probe(radius_mm);
        double mm_per_px = probe.gel().mm_per_pixel();
        double radius_px = radius_mm / mm_per_px;
        int box_half = int(std::ceil(cfg.mask_box_margin * radius_px));

        probe.move_to(0.0, 0.0);
        auto centers = propagate_centers(probe.center_row_px(), probe.center_col_px(), plan,
                                         mm_per_px, probe.gel().width(), probe.gel().height());

        for (size_t i = 0; i < plan.positions.size(); ++i) {
            auto [x_mm, y_mm] = plan.positions[i];
            probe.move_to(x_mm, y_mm);
            probe.set_z(cfg.touch.down_step_mm * 3.0);  // clearance height
            TactileImage untouched = probe.capture();
            double z_touch = detect_touch(probe, cfg.touch);
            probe.set_z(z_touch - radius_mm);  // indent by the indenter radius
            TactileImage image = probe.capture();

            IndentationSample s;
            s.center_row_px = centers[i].first;
            s.center_col_px = centers[i].second;
            s.indenter_radius_px = radius_px;
            s.indenter_radius_mm = radius_mm;
            s.gt_normals = gt_normals_for_sphere(s.center_row_px, s.center_col_px, radius_px,
                                                 probe.gel().width(), probe.gel().height());
            s.mask = build_mask(s.center_row_px, s.center_col_px, box_half, cfg.mask_gamma,
                                probe.gel().width(), probe.gel().height(),
                                rng::mix(cfg.seed, samples.size()));
            s.image = std::move(image);
            s.untouched = std::move(untouched);
            s.label_source = x_mm == 0.0 && y_mm == 0.0;
            samples.push_back(std::move(s));
        }
    }

    // Seeded 90-10 split over non-label-source samples.
    std::vector<size_t> idx;
    for (size_t i = 0; i < samples.size(); ++i) idx.push_back(i);
    rng::Stream stream(rng::mix(cfg.seed, 0x5917));
    for (size_t i = idx.size(); i > 1; --i)
        std::swap(idx[i - 1], idx[size_t(stream.next_below(i))]);
    size_t want_test = size_t(std::llround(cfg.test_fraction * double(samples.size())));
    size_t assigned = 0;
    for (size_t i : idx) {
        if (assigned >= want_test) break;
        if (samples[i].label_source) continue;
        samples[i].test_split = true;
        ++assigned;
    }
    return samples;
}

}  // namespace tactilemap
