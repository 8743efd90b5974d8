#include "gazeinspect/pose_planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace gazeinspect {

std::string_view to_string(DistanceFormula f) {
    return f == DistanceFormula::PaperLiteral ? "literal" : "corrected";
}

DistanceFormula distance_formula_from_string(std::string_view s) {
    if (s == "corrected") return DistanceFormula::GeometricCorrected;
    if (s == "literal") return DistanceFormula::PaperLiteral;
    throw std::invalid_argument("unknown distance formula: " + std::string(s));
}

void CameraConfig::validate() const {
    if (!(theta_h_deg > 0.0 && theta_h_deg < 180.0) || !(theta_v_deg > 0.0 && theta_v_deg < 180.0))
        throw std::domain_error("camera field of view must be in (0, 180) degrees");
    if (!(aspect_ratio > 0.0)) throw std::domain_error("aspect ratio must be positive");
    if (!(safety_factor >= 1.0)) throw std::domain_error("safety factor must be at least 1");
}

PanTilt orientation(double theta_x_deg, double theta_y_deg, double theta_z_deg,
                    double vertical_threshold_deg) {
    if (std::abs(theta_x_deg) >= vertical_threshold_deg) {
        const double s = sgn(theta_x_deg);
        return {theta_y_deg - s * theta_z_deg, s * 90.0};
    }
    return {theta_y_deg, theta_x_deg};
}

Framing framing(double w_m, double h_m, double theta_z_deg, DefectOrientation type, double aspect_ratio) {
    if (w_m < h_m || h_m < 0.0) throw std::domain_error("framing expects w >= h >= 0");
    if (w_m == 0.0) throw DegenerateGeometry("framing of a zero-size defect");

    // a drone can yaw freely above a floor or below a ceiling
    const double tz = type == DefectOrientation::Vertical ? 0.0 : deg_to_rad(theta_z_deg);
    Framing f;
    f.width_m = std::max(w_m * std::cos(tz), h_m * std::sin(tz));
    f.height_m = std::max(w_m * std::sin(tz), h_m * std::cos(tz));
    f.omega = f.height_m > 0.0 ? f.width_m / (f.height_m * aspect_ratio)
                               : std::numeric_limits<double>::infinity();
    return f;
}

double standoff_distance(const Framing& f, const CameraConfig& camera) {
    const bool width_ref = f.omega >= 1.0;
    const double half_len = (width_ref ? f.width_m : f.height_m) / 2.0;
    const double half_fov = deg_to_rad(width_ref ? camera.theta_h_deg : camera.theta_v_deg) / 2.0;

    const double d = camera.distance_formula == DistanceFormula::GeometricCorrected
                         ? half_len / std::tan(half_fov) * camera.safety_factor
                         : half_len * std::tan(half_fov) * camera.safety_factor;
    if (!(d > 0.0)) throw DegenerateGeometry("non-positive standoff distance");
    return d;
}

DronePose plan_pose(const DefectEstimate& defect, const CameraConfig& camera) {
    const PanTilt pt = orientation(defect, camera.vertical_threshold_deg);
    const Framing fr = framing(defect.w_m, defect.h_m, defect.theta_z_deg, defect.orientation,
                               camera.aspect_ratio);
    DronePose pose;
    pose.pan_deg = pt.pan_deg;
    pose.tilt_deg = pt.tilt_deg;
    pose.standoff_m = standoff_distance(fr, camera);
    pose.position = defect.center - yaw_pitch(pt.pan_deg, pt.tilt_deg) * Vec3(0.0, 0.0, pose.standoff_m);
    return pose;
}

}  // namespace gazeinspect
