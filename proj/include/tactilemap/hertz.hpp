#pragma once

#include <string>
#include <vector>

namespace tactilemap {

// Units: displacement mm, force N, modulus kPa.
struct ForceCurve {
    std::vector<double> displacement_mm;  // monotone non-decreasing
    std::vector<double> force_n;
    double indenter_radius_mm = 1.5;
    double poisson_ratio = 0.49;

    void validate() const;
    static ForceCurve from_csv(const std::string& path, double indenter_radius_mm,
                               double poisson_ratio = 0.49);
};

struct HertzFit {
    double young_modulus_kpa = 0;
    double contact_offset_mm = 0;  // nonzero only for the two-parameter variant
    double residual_rms_n = 0;
    int iterations = 0;
};

// Rigid sphere on an incompressible half-space:
// F = 4/3 * (E2 / (1 - nu^2)) * sqrt(R) * d^(3/2), converted kPa*mm^2 -> N.
double hertz_force(double displacement_mm, double young_modulus_kpa, double poisson_ratio,
                   double indenter_radius_mm);

// Least-squares E2 > 0. The model is linear in E2, so the solution is closed
// form. fit_contact_offset additionally searches a pre-contact offset d0 with
// d -> max(0, d - d0).
HertzFit fit_modulus(const ForceCurve& curve, bool fit_contact_offset = false);

}  // namespace tactilemap
