#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace gazeinspect {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Microseconds on a session-relative monotonic clock.
using TimestampUs = std::int64_t;

inline constexpr double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
inline constexpr double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

// Right-handed active rotations. The whole pipeline (Euler extraction,
// projection, drone pose) uses these two and nothing else.
inline Mat3 rotation_x(double angle_deg) {
    const double a = deg_to_rad(angle_deg);
    const double c = std::cos(a), s = std::sin(a);
    Mat3 r;
    r << 1, 0, 0,
         0, c, -s,
         0, s, c;
    return r;
}

inline Mat3 rotation_y(double angle_deg) {
    const double a = deg_to_rad(angle_deg);
    const double c = std::cos(a), s = std::sin(a);
    Mat3 r;
    r << c, 0, s,
         0, 1, 0,
         -s, 0, c;
    return r;
}

/// R_y(pan) * R_x(tilt): camera frame to world frame.
inline Mat3 yaw_pitch(double pan_deg, double tilt_deg) {
    return rotation_y(pan_deg) * rotation_x(tilt_deg);
}

inline bool is_unit(const Vec3& v, double tol = 1e-6) {
    return std::abs(v.norm() - 1.0) <= tol;
}

inline double sgn(double x) { return (x > 0.0) - (x < 0.0); }

}  // namespace gazeinspect
