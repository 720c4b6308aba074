#pragma once

#include <array>
#include <optional>
#include <vector>

#include "tactilemap/raster.hpp"

namespace tactilemap {

// Three-light Lambertian forward model with per-channel gain maps,
// approximating RGB light injected from three sides of the sensor.
struct LightingModel {
    // Unit light directions, one per channel (R,G,B).
    std::array<std::array<double, 3>, 3> directions;
    std::array<double, 3> ambient = {0.25, 0.25, 0.25};
    // Smooth radial falloff 1 - falloff * (rho/rho_max)^2, in (0,1].
    double gain_falloff = 0.2;
    double noise_sigma = 0.0;

    // Azimuths 0/120/240 degrees at 45 degrees elevation.
    static LightingModel three_point_default();
    void validate() const;
    double gain_at(int row, int col, int width, int height) const;
};

// Lambert shading of the analytic surface normals of `height` (central
// differences in physical units). I_c = clamp(g_c * max(0, n.d_c) + b_c + eps).
TactileImage render(const HeightMap& height, const LightingModel& lights, uint64_t rng_seed);

// Surface normals of a height field by central differences (one-sided at the
// borders), in physical units.
NormalMap height_to_normals(const HeightMap& height);

// Rigid spherical cap pressed to depth_mm: negative heights inside the
// contact disk, zero outside. C0-continuous at the rim when depth = radius.
HeightMap sphere_imprint(double center_row_px, double center_col_px, double indenter_radius_mm,
                         double depth_mm, const SensorGeometry& geom);

struct ChannelObjectSpec {
    enum class Layout { Straight, Circular };
    Layout layout = Layout::Straight;
    double channel_width_um = 500.0;
    double channel_pitch_um = 1000.0;  // groove start to groove start; gap equals width
    double depth_um = 96.0;
    double center_row_px = 0.0;  // circular layout only
    double center_col_px = 0.0;
    // Straight layout: grooves run along rows (profile varies across columns)
    // when true, along columns otherwise.
    bool vertical_grooves = true;

    void validate() const;
};

// Rectangular-profile grooves cut into a flat surface (grooves at -depth, lands at 0).
HeightMap channel_object(const ChannelObjectSpec& spec, const SensorGeometry& geom);

// Stands in for the calibration rig: gel + indenter with exact z control.
// Captured images include a contact speckle term: gel-indenter contact makes
// the coating microstructure visible inside the contact disk as soon as
// adhesive contact forms, so the image response has a sharp onset at touch.
class VirtualProbe {
public:
    VirtualProbe(HeightMap gel, LightingModel lights, double indenter_radius_mm, uint64_t seed);

    void move_to(double x_mm, double y_mm);  // lateral position of the indenter axis
    void set_z(double z_mm) { z_mm_ = z_mm; }
    void step_z(double dz_mm) { z_mm_ += dz_mm; }
    double z() const { return z_mm_; }
    double indenter_radius_mm() const { return indenter_radius_mm_; }
    const HeightMap& gel() const { return gel_; }
    const LightingModel& lights() const { return lights_; }
    double center_row_px() const;
    double center_col_px() const;

    // Contact-speckle controls (see class comment).
    double contact_speckle_sigma = 0.3;
    double adhesion_radius_mm = 0.2;

    // Depth of the current imprint, max(0, -z).
    double depth_mm() const { return z_mm_ < 0 ? -z_mm_ : 0.0; }
    // Renders the gel with the indenter imprinted to the current depth.
    // Each call advances the probe's capture counter, so repeated captures get
    // independent noise.
    TactileImage capture();
    HeightMap imprinted_height() const;

private:
    HeightMap gel_;
    LightingModel lights_;
    double indenter_radius_mm_;
    double x_mm_ = 0.0;
    double y_mm_ = 0.0;
    double z_mm_ = 1.0;
    uint64_t seed_;
    uint64_t capture_counter_ = 0;
};

std::vector<TactileImage> probe_capture(VirtualProbe& probe, int n);

}  // namespace tactilemap
