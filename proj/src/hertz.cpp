#include "tactilemap/hertz.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "tactilemap/common.hpp"

namespace tactilemap {

void ForceCurve::validate() const {
    require(displacement_mm.size() == force_n.size(), ErrorCode::DimensionMismatch,
            "displacement and force must have equal length");
    require(displacement_mm.size() >= 3, ErrorCode::InvalidArgument,
            "need at least 3 samples to fit");
    require(indenter_radius_mm > 0, ErrorCode::InvalidArgument, "radius must be positive");
    require(poisson_ratio > 0 && poisson_ratio < 0.5, ErrorCode::InvalidArgument,
            "poisson ratio must lie in (0, 0.5)");
    for (size_t i = 0; i < displacement_mm.size(); ++i) {
        require(std::isfinite(displacement_mm[i]) && std::isfinite(force_n[i]),
                ErrorCode::InvalidArgument, "curve values must be finite");
        require(displacement_mm[i] >= 0, ErrorCode::InvalidArgument,
                "displacements must be non-negative");
        if (i > 0)
            require(displacement_mm[i] >= displacement_mm[i - 1], ErrorCode::InvalidArgument,
                    "displacements must be monotone non-decreasing");
    }
}

ForceCurve ForceCurve::from_csv(const std::string& path, double indenter_radius_mm,
                                double poisson_ratio) {
    std::ifstream is(path);
    require(bool(is), ErrorCode::IoFailure, "cannot open: " + path);
    ForceCurve curve;
    curve.indenter_radius_mm = indenter_radius_mm;
    curve.poisson_ratio = poisson_ratio;
    std::string line;
    bool first = true;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string a, b;
        if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',')) continue;
        if (first) {
            first = false;
            // Skip a header row if the first field is not numeric.
            char* end = nullptr;
            std::strtod(a.c_str(), &end);
            if (end == a.c_str()) continue;
        }
        curve.displacement_mm.push_back(std::stod(a));
        curve.force_n.push_back(std::stod(b));
    }
    curve.validate();
    return curve;
}

double hertz_force(double displacement_mm, double young_modulus_kpa, double poisson_ratio,
                   double indenter_radius_mm) {
    require(displacement_mm >= 0, ErrorCode::InvalidArgument, "displacement must be non-negative");
    double e_star_kpa = young_modulus_kpa / (1.0 - poisson_ratio * poisson_ratio);
    // kPa * mm^2 = 1e-3 N
    return 4.0 / 3.0 * e_star_kpa * std::sqrt(indenter_radius_mm) *
           std::pow(displacement_mm, 1.5) * 1e-3;
}

namespace {

// Closed-form least squares for fixed contact offset.
HertzFit solve_for_offset(const ForceCurve& c, double d0) {
    double num = 0, den = 0;
    for (size_t i = 0; i < c.displacement_mm.size(); ++i) {
        double d = std::max(0.0, c.displacement_mm[i] - d0);
        double g = hertz_force(d, 1.0, c.poisson_ratio, c.indenter_radius_mm);  // per kPa
        num += c.force_n[i] * g;
        den += g * g;
    }
    require(den > 0, ErrorCode::IllPosed, "all displacements are zero; modulus is unidentifiable");
    HertzFit fit;
    fit.young_modulus_kpa = num / den;
    fit.contact_offset_mm = d0;
    double ss = 0;
    for (size_t i = 0; i < c.displacement_mm.size(); ++i) {
        double d = std::max(0.0, c.displacement_mm[i] - d0);
        double r = c.force_n[i] -
                   hertz_force(d, fit.young_modulus_kpa, c.poisson_ratio, c.indenter_radius_mm);
        ss += r * r;
    }
    fit.residual_rms_n = std::sqrt(ss / double(c.displacement_mm.size()));
    return fit;
}

}  // namespace

HertzFit fit_modulus(const ForceCurve& curve, bool fit_contact_offset) {
    curve.validate();
    if (!fit_contact_offset) return solve_for_offset(curve, 0.0);

    // Golden-section search on d0; the inner problem stays closed form.
    double lo = 0.0, hi = curve.displacement_mm.back() * 0.9;
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
    double f1 = solve_for_offset(curve, x1).residual_rms_n;
    double f2 = solve_for_offset(curve, x2).residual_rms_n;
    int iters = 0;
    while (b - a > 1e-9 && iters < 200) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = solve_for_offset(curve, x1).residual_rms_n;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = solve_for_offset(curve, x2).residual_rms_n;
        }
        ++iters;
    }
    HertzFit fit = solve_for_offset(curve, (a + b) / 2.0);
    fit.iterations = iters;
    return fit;
}

}  // namespace tactilemap
