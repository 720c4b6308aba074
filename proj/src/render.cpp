#include "tactilemap/render.hpp"

#include <cmath>

#include "tactilemap/threading.hpp"

namespace tactilemap {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

LightingModel LightingModel::three_point_default() {
    LightingModel m;
    double elev = kPi / 4.0;
    for (int c = 0; c < 3; ++c) {
        double az = 2.0 * kPi * c / 3.0;
        m.directions[c] = {std::cos(az) * std::cos(elev), std::sin(az) * std::cos(elev),
                           std::sin(elev)};
    }
    return m;
}

void LightingModel::validate() const {
    for (const auto& d : directions) {
        double n = std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
        require(std::abs(n - 1.0) < 1e-9, ErrorCode::InvalidArgument,
                "light directions must be unit vectors");
    }
    for (double b : ambient)
        require(b >= 0.0 && b <= 1.0, ErrorCode::InvalidArgument, "ambient must lie in [0,1]");
    require(gain_falloff >= 0.0 && gain_falloff < 1.0, ErrorCode::InvalidArgument,
            "gain falloff must lie in [0,1)");
    require(noise_sigma >= 0.0, ErrorCode::InvalidArgument, "noise sigma must be non-negative");
}

double LightingModel::gain_at(int row, int col, int width, int height) const {
    double cx = (width - 1) / 2.0, cy = (height - 1) / 2.0;
    double rho2 = (col - cx) * (col - cx) + (row - cy) * (row - cy);
    double rho2_max = cx * cx + cy * cy;
    return 1.0 - gain_falloff * (rho2_max > 0 ? rho2 / rho2_max : 0.0);
}

NormalMap height_to_normals(const HeightMap& height) {
    int w = height.width(), h = height.height();
    double pitch_um = height.mm_per_pixel() * 1000.0;
    NormalMap out(w, h);
    parallel_for(size_t(h), [&](size_t r0, size_t r1) {
        for (size_t r = r0; r < r1; ++r) {
            for (int c = 0; c < w; ++c) {
                int cl = c > 0 ? c - 1 : 0, cr = c < w - 1 ? c + 1 : w - 1;
                int ru = int(r) > 0 ? int(r) - 1 : 0, rd = int(r) < h - 1 ? int(r) + 1 : h - 1;
                double dx = (height.at(int(r), cr) - height.at(int(r), cl)) / ((cr - cl) * pitch_um);
                double dy = (height.at(rd, c) - height.at(ru, c)) / ((rd - ru) * pitch_um);
                double inv = 1.0 / std::sqrt(1.0 + dx * dx + dy * dy);
                out.set(int(r), c, float(-dx * inv), float(-dy * inv), float(inv));
            }
        }
    });
    return out;
}

static TactileImage shade(const HeightMap& height, const LightingModel& lights, uint64_t seed,
                          uint64_t frame_index, const BinaryMask* speckle_region,
                          double speckle_sigma, uint64_t texture_seed) {
    lights.validate();
    NormalMap normals = height_to_normals(height);
    int w = height.width(), h = height.height();
    TactileImage img(w, h);
    uint64_t frame_seed = rng::mix(seed, frame_index);
    parallel_for(size_t(h), [&](size_t r0, size_t r1) {
        for (size_t r = r0; r < r1; ++r) {
            for (int c = 0; c < w; ++c) {
                const float* n = normals.at(int(r), c);
                double gain = lights.gain_at(int(r), c, w, h);
                uint64_t pix = (r * size_t(w) + c) * 4;
                double speck = 0.0;
                // Achromatic speckle from the gel's coating microstructure; the
                // texture is a fixed property of the gel, not per-frame noise.
                if (speckle_region && speckle_region->at(int(r), c))
                    speck = speckle_sigma * rng::normal(texture_seed, r * size_t(w) + c);
                float* out = img.at(int(r), c);
                for (int ch = 0; ch < 3; ++ch) {
                    const auto& d = lights.directions[ch];
                    double lambert = n[0] * d[0] + n[1] * d[1] + n[2] * d[2];
                    double v = gain * std::max(0.0, lambert) + lights.ambient[ch] + speck;
                    if (lights.noise_sigma > 0)
                        v += lights.noise_sigma * rng::normal(frame_seed, pix + ch);
                    out[ch] = float(std::clamp(v, 0.0, 1.0));
                }
            }
        }
    });
    return img;
}

TactileImage render(const HeightMap& height, const LightingModel& lights, uint64_t rng_seed) {
    height.validate();
    return shade(height, lights, rng_seed, 0, nullptr, 0.0, 0);
}

HeightMap sphere_imprint(double center_row_px, double center_col_px, double indenter_radius_mm,
                         double depth_mm, const SensorGeometry& geom) {
    require(indenter_radius_mm > 0, ErrorCode::InvalidArgument, "indenter radius must be positive");
    require(depth_mm >= 0 && depth_mm <= indenter_radius_mm, ErrorCode::InvalidArgument,
            "imprint depth must lie in [0, indenter radius]");
    int n = geom.crop_size;
    HeightMap out(n, n, geom.mm_per_pixel);
    if (depth_mm == 0.0) return out;
    double R = indenter_radius_mm;
    double contact_mm = std::sqrt(R * R - (R - depth_mm) * (R - depth_mm));
    double pitch = geom.mm_per_pixel;
    for (int r = 0; r < n; ++r) {
        double dy = (r - center_row_px) * pitch;
        for (int c = 0; c < n; ++c) {
            double dx = (c - center_col_px) * pitch;
            double rho2 = dx * dx + dy * dy;
            if (rho2 <= contact_mm * contact_mm) {
                double cap = R - std::sqrt(R * R - rho2);
                out.at(r, c) = float(-(depth_mm - cap) * 1000.0);  // mm -> um
            }
        }
    }
    return out;
}

void ChannelObjectSpec::validate() const {
    require(depth_um >= 0, ErrorCode::InvalidArgument, "channel depth must be non-negative");
    require(channel_width_um > 0, ErrorCode::InvalidArgument, "channel width must be positive");
    require(channel_pitch_um >= channel_width_um, ErrorCode::InvalidArgument,
            "channel pitch must be at least the channel width");
}

HeightMap channel_object(const ChannelObjectSpec& spec, const SensorGeometry& geom) {
    spec.validate();
    int n = geom.crop_size;
    HeightMap out(n, n, geom.mm_per_pixel);
    if (spec.depth_um == 0.0) return out;
    double pitch_px = geom.mm_per_pixel * 1000.0;  // um per pixel
    auto in_groove = [&](double pos_um) {
        double m = std::fmod(pos_um, spec.channel_pitch_um);
        if (m < 0) m += spec.channel_pitch_um;
        return m < spec.channel_width_um;
    };
    if (spec.layout == ChannelObjectSpec::Layout::Straight) {
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) {
                double pos = (spec.vertical_grooves ? c : r) * pitch_px;
                if (in_groove(pos)) out.at(r, c) = float(-spec.depth_um);
            }
    } else {
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) {
                double dy = (r - spec.center_row_px) * pitch_px;
                double dx = (c - spec.center_col_px) * pitch_px;
                double rho = std::sqrt(dx * dx + dy * dy);
                if (in_groove(rho)) out.at(r, c) = float(-spec.depth_um);
            }
    }
    return out;
}

VirtualProbe::VirtualProbe(HeightMap gel, LightingModel lights, double indenter_radius_mm,
                           uint64_t seed)
    : gel_(std::move(gel)), lights_(lights), indenter_radius_mm_(indenter_radius_mm), seed_(seed) {
    gel_.validate();
    lights_.validate();
    require(indenter_radius_mm > 0, ErrorCode::InvalidArgument, "indenter radius must be positive");
}

void VirtualProbe::move_to(double x_mm, double y_mm) {
    x_mm_ = x_mm;
    y_mm_ = y_mm;
}

double VirtualProbe::center_row_px() const {
    return (gel_.height() - 1) / 2.0 + y_mm_ / gel_.mm_per_pixel();
}

double VirtualProbe::center_col_px() const {
    return (gel_.width() - 1) / 2.0 + x_mm_ / gel_.mm_per_pixel();
}

HeightMap VirtualProbe::imprinted_height() const {
    double depth = std::min(depth_mm(), indenter_radius_mm_);
    SensorGeometry g;
    g.crop_size = gel_.width();
    g.mm_per_pixel = gel_.mm_per_pixel();
    HeightMap imprint = sphere_imprint(center_row_px(), center_col_px(), indenter_radius_mm_, depth, g);
    HeightMap out = gel_;
    // The indenter carves below the existing surface.
    for (size_t i = 0; i < out.data().size(); ++i)
        out.data()[i] = std::min(out.data()[i], imprint.data()[i]);
    return out;
}

TactileImage VirtualProbe::capture() {
    HeightMap surface = imprinted_height();
    std::optional<BinaryMask> contact;
    if (depth_mm() > 0.0 && contact_speckle_sigma > 0.0) {
        // Adhesive contact spot: never smaller than the adhesion radius.
        double depth = std::min(depth_mm(), indenter_radius_mm_);
        double R = indenter_radius_mm_;
        double a_mm = std::max(std::sqrt(R * R - (R - depth) * (R - depth)), adhesion_radius_mm);
        double a_px = a_mm / gel_.mm_per_pixel();
        contact.emplace(gel_.width(), gel_.height());
        double cr = center_row_px(), cc = center_col_px();
        int r0 = std::max(0, int(cr - a_px) - 1), r1 = std::min(gel_.height() - 1, int(cr + a_px) + 1);
        int c0 = std::max(0, int(cc - a_px) - 1), c1 = std::min(gel_.width() - 1, int(cc + a_px) + 1);
        for (int r = r0; r <= r1; ++r)
            for (int c = c0; c <= c1; ++c)
                if ((r - cr) * (r - cr) + (c - cc) * (c - cc) <= a_px * a_px)
                    contact->at(r, c) = 1;
    }
    return shade(surface, lights_, seed_, ++capture_counter_, contact ? &*contact : nullptr,
                 contact_speckle_sigma, rng::mix(seed_, 0xA11A));
}

std::vector<TactileImage> probe_capture(VirtualProbe& probe, int n) {
    require(n >= 1, ErrorCode::InvalidArgument, "capture count must be at least 1");
    std::vector<TactileImage> frames;
    frames.reserve(size_t(n));
    for (int i = 0; i < n; ++i) frames.push_back(probe.capture());
    return frames;
}

}  // namespace tactilemap
