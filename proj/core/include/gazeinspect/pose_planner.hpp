#pragma once

#include <string_view>

#include "gazeinspect/defect_eval.hpp"

namespace gazeinspect {

enum class DistanceFormula {
    GeometricCorrected,  // pinhole framing: (L/2) / tan(fov/2) * SF
    PaperLiteral,        // (L/2) * tan(fov/2) * SF, kept for comparison runs
};

std::string_view to_string(DistanceFormula f);  // "corrected" | "literal"
DistanceFormula distance_formula_from_string(std::string_view s);

struct CameraConfig {
    double theta_h_deg{64.0};
    double theta_v_deg{37.0};
    double aspect_ratio{1.778};
    double safety_factor{1.5};
    DistanceFormula distance_formula{DistanceFormula::GeometricCorrected};
    double vertical_threshold_deg{80.0};

    void validate() const;
};

struct DronePose {
    Vec3 position{Vec3::Zero()};
    double pan_deg{0.0};
    double tilt_deg{0.0};
    double standoff_m{0.0};

    /// Unit viewing direction of the camera in world coordinates.
    Vec3 view_direction() const { return yaw_pitch(pan_deg, tilt_deg) * Vec3::UnitZ(); }
};

struct PanTilt {
    double pan_deg{0.0};
    double tilt_deg{0.0};
};

PanTilt orientation(double theta_x_deg, double theta_y_deg, double theta_z_deg,
                    double vertical_threshold_deg = 80.0);
inline PanTilt orientation(const DefectEstimate& d, double vertical_threshold_deg = 80.0) {
    return orientation(d.theta_x_deg, d.theta_y_deg, d.theta_z_deg, vertical_threshold_deg);
}

struct Framing {
    double width_m{0.0};   // W
    double height_m{0.0};  // H
    double omega{0.0};     // W / (H * AR); +inf when H == 0
};

Framing framing(double w_m, double h_m, double theta_z_deg, DefectOrientation type, double aspect_ratio);

double standoff_distance(const Framing& f, const CameraConfig& camera);

DronePose plan_pose(const DefectEstimate& defect, const CameraConfig& camera);

}  // namespace gazeinspect
