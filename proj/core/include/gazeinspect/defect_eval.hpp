#pragma once

#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "gazeinspect/gaze_core.hpp"

namespace gazeinspect {

/// Geometry that cannot produce an estimate (all points identical, zero extents).
class DegenerateGeometry : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class DefectKind { Crack, AreaDefect };
enum class DefectOrientation { Horizontal, Vertical };

std::string_view to_string(DefectKind kind);          // "crack" | "area"
std::string_view to_string(DefectOrientation o);      // "horizontal" | "vertical"

struct DefectConfig {
    double crack_width_m{0.05};
    double vertical_threshold_deg{80.0};
};

struct DefectEstimate {
    Vec3 center{Vec3::Zero()};
    Vec3 avg_normal{Vec3::UnitZ()};
    double theta_x_deg{0.0};
    double theta_y_deg{0.0};
    double w_m{0.0};
    double h_m{0.0};
    double theta_z_deg{0.0};
    double area_m2{0.0};
    DefectKind kind{DefectKind::AreaDefect};
    DefectOrientation orientation{DefectOrientation::Horizontal};
    bool normal_fallback{false};  // mean normal cancelled out; last fixation's normal used
};

struct AverageNormal {
    Vec3 normal{Vec3::UnitZ()};
    bool fallback{false};
};

AverageNormal average_normal(std::span<const FixationEvent> fixations);

struct EulerAngles {
    double theta_x_deg{0.0};
    double theta_y_deg{0.0};
};

/// YX Euler angles such that R_y(theta_y) * R_x(theta_x) * z = -v.
EulerAngles euler_from_normal(const Vec3& v);

/// Rotation taking the surface frame (normal along -z) to world coordinates.
inline Mat3 surface_to_world(const EulerAngles& e) {
    return rotation_y(e.theta_y_deg) * rotation_x(e.theta_x_deg);
}

/// x/y of R_x(-theta_x) R_y(-theta_y) c for each centroid; depth is dropped.
std::vector<Vec2> project_fixations(std::span<const FixationEvent> fixations, const EulerAngles& e);

struct ConvexHull {
    std::vector<Vec2> vertices;  // counter-clockwise, no collinear vertices
    double area_m2{0.0};
};

/// Andrew's monotone chain; shoelace area. Fewer than three non-collinear
/// points give the degenerate vertex list and zero area.
ConvexHull convex_hull(std::span<const Vec2> points);

double shoelace_area(std::span<const Vec2> polygon);

/// Area centroid of a simple polygon; vertex mean when the area vanishes.
Vec2 polygon_centroid(std::span<const Vec2> polygon);

/// Data-collection stopping rule on the per-fixation hull area history.
bool should_stop(std::span<const double> hull_area_history);

struct PrincipalAxes {
    double w_m{0.0};
    double h_m{0.0};
    double theta_z_deg{0.0};  // long axis against the x axis, folded into [0, 90]
};

/// PCA of a point set: covariance eigenvectors, full extents along them.
PrincipalAxes principal_axes(std::span<const Vec2> points);

/// Same, with the covariance of the filled polygon (second moments of area)
/// instead of its vertices. Vertex PCA of a hull follows wherever the
/// boundary happens to be sampled densely; the region does not. A polygon
/// without area falls back to principal_axes.
PrincipalAxes region_principal_axes(std::span<const Vec2> polygon);

DefectEstimate estimate_defect(std::span<const FixationEvent> fixations, const DefectConfig& config = {});

struct CollectionProgress {
    std::size_t n_fixations{0};
    double hull_area_m2{0.0};
    bool stopped{false};
};

/// Fixations gathered while the inspector is in the inspecting state.
class FixationCollection {
public:
    CollectionProgress append(const FixationEvent& f);

    bool should_stop() const;
    DefectEstimate estimate(const DefectConfig& config = {}) const;

    const std::vector<FixationEvent>& fixations() const { return fixations_; }
    const std::vector<double>& hull_area_history() const { return hull_area_history_; }
    bool empty() const { return fixations_.empty(); }

private:
    std::vector<FixationEvent> fixations_;
    std::vector<double> hull_area_history_;
};

}  // namespace gazeinspect
