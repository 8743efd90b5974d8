#include "gazeinspect/defect_eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Eigenvalues>

namespace gazeinspect {

namespace {

double cross(const Vec2& o, const Vec2& a, const Vec2& b) {
    return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

bool lex_less(const Vec2& a, const Vec2& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
}

double fold_to_quadrant(double angle_deg) {
    double a = std::fmod(angle_deg, 180.0);
    if (a < 0.0) a += 180.0;
    if (a > 90.0) a = 180.0 - a;
    return a;
}

}  // namespace

std::string_view to_string(DefectKind kind) {
    return kind == DefectKind::Crack ? "crack" : "area";
}

std::string_view to_string(DefectOrientation o) {
    return o == DefectOrientation::Vertical ? "vertical" : "horizontal";
}

AverageNormal average_normal(std::span<const FixationEvent> fixations) {
    if (fixations.empty()) throw DegenerateGeometry("average normal of an empty fixation set");
    Vec3 sum = Vec3::Zero();
    for (const auto& f : fixations) sum += f.mean_normal;
    const double len = sum.norm();
    if (len <= 1e-12) return {fixations.back().mean_normal.normalized(), true};
    return {sum / len, false};
}

EulerAngles euler_from_normal(const Vec3& v) {
    if (!is_unit(v)) throw std::domain_error("euler_from_normal expects a unit vector");
    const double v1 = v.x(), v2 = v.y(), v3 = v.z();
    if (std::abs(v2) >= 1.0 - 1e-9) return {sgn(v2) * 90.0, 0.0};

    const double k = std::sqrt(1.0 - v2 * v2);
    EulerAngles e;
    e.theta_x_deg = rad_to_deg(std::atan2(v2, k));
    // + 0.0 turns -0 into +0 so a wall facing +z reads 180, not -180
    e.theta_y_deg = rad_to_deg(std::atan2(-v1 / k + 0.0, -v3 / k));
    return e;
}

std::vector<Vec2> project_fixations(std::span<const FixationEvent> fixations, const EulerAngles& e) {
    const Mat3 to_surface = surface_to_world(e).transpose();
    std::vector<Vec2> out;
    out.reserve(fixations.size());
    for (const auto& f : fixations) {
        const Vec3 p = to_surface * f.centroid;
        out.emplace_back(p.x(), p.y());
    }
    return out;
}

double shoelace_area(std::span<const Vec2> polygon) {
    const std::size_t n = polygon.size();
    if (n < 3) return 0.0;
    double twice = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& a = polygon[i];
        const Vec2& b = polygon[(i + 1) % n];
        twice += a.x() * b.y() - b.x() * a.y();
    }
    return std::abs(twice) / 2.0;
}

Vec2 polygon_centroid(std::span<const Vec2> polygon) {
    const std::size_t n = polygon.size();
    if (n == 0) throw DegenerateGeometry("centroid of an empty polygon");
    double twice_area = 0.0;
    Vec2 acc = Vec2::Zero();
    for (std::size_t i = 0; i < n && n >= 3; ++i) {
        const Vec2& a = polygon[i];
        const Vec2& b = polygon[(i + 1) % n];
        const double c = a.x() * b.y() - b.x() * a.y();
        twice_area += c;
        acc += (a + b) * c;
    }
    if (std::abs(twice_area) <= 1e-15) {
        Vec2 mean = Vec2::Zero();
        for (const auto& p : polygon) mean += p;
        return mean / static_cast<double>(n);
    }
    return acc / (3.0 * twice_area);
}

ConvexHull convex_hull(std::span<const Vec2> points) {
    std::vector<Vec2> pts(points.begin(), points.end());
    std::sort(pts.begin(), pts.end(), lex_less);
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    ConvexHull hull;
    if (pts.size() <= 2) {
        hull.vertices = std::move(pts);
        return hull;
    }

    std::vector<Vec2> chain(2 * pts.size());
    std::size_t k = 0;
    for (const auto& p : pts) {
        while (k >= 2 && cross(chain[k - 2], chain[k - 1], p) <= 0.0) --k;
        chain[k++] = p;
    }
    for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
        const Vec2& p = pts[i];
        while (k >= lower && cross(chain[k - 2], chain[k - 1], p) <= 0.0) --k;
        chain[k++] = p;
    }
    chain.resize(k - 1);  // last point repeats the first

    hull.vertices = std::move(chain);
    hull.area_m2 = shoelace_area(hull.vertices);
    return hull;
}

bool should_stop(std::span<const double> history) {
    const std::size_t n = history.size();
    if (n < 6) return false;
    const double latest = history[n - 1];
    double prior = 0.0;
    for (std::size_t i = n - 6; i < n - 1; ++i) prior += history[i];
    return latest - prior / 5.0 <= latest / 100.0;
}

namespace {

// Eigenvectors of `cov` as axes; w and h are the full extents of `points` along them.
PrincipalAxes axes_from_covariance(const Eigen::Matrix2d& cov, std::span<const Vec2> points) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> solver(cov);
    Vec2 major = solver.eigenvectors().col(1);
    Vec2 minor = solver.eigenvectors().col(0);

    auto extent = [&](const Vec2& axis) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (const auto& p : points) {
            const double s = p.dot(axis);
            lo = std::min(lo, s);
            hi = std::max(hi, s);
        }
        return hi - lo;
    };
    double w = extent(major);
    double h = extent(minor);
    if (h > w) {
        std::swap(w, h);
        std::swap(major, minor);
    }

    PrincipalAxes out;
    out.w_m = w;
    out.h_m = h;
    out.theta_z_deg = fold_to_quadrant(rad_to_deg(std::atan2(major.y(), major.x())));
    return out;
}

}  // namespace

PrincipalAxes principal_axes(std::span<const Vec2> points) {
    if (points.empty()) throw DegenerateGeometry("principal axes of an empty point set");
    const bool all_same = std::all_of(points.begin(), points.end(),
                                      [&](const Vec2& p) { return p == points.front(); });
    if (all_same) throw DegenerateGeometry("principal axes need at least two distinct points");

    Vec2 mean = Vec2::Zero();
    for (const auto& p : points) mean += p;
    mean /= static_cast<double>(points.size());

    Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
    for (const auto& p : points) {
        const Vec2 d = p - mean;
        cov += d * d.transpose();
    }
    cov /= static_cast<double>(points.size());
    return axes_from_covariance(cov, points);
}

PrincipalAxes region_principal_axes(std::span<const Vec2> polygon) {
    const std::size_t n = polygon.size();
    if (n < 3 || shoelace_area(polygon) <= 1e-12) return principal_axes(polygon);

    // second moments of area, accumulated over the triangle fan from the origin;
    // shifting to the first vertex keeps the sums well conditioned
    const Vec2 o = polygon[0];
    double twice_area = 0.0, sxx = 0.0, syy = 0.0, sxy = 0.0;
    Vec2 first = Vec2::Zero();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 a = polygon[i] - o;
        const Vec2 b = polygon[(i + 1) % n] - o;
        const double c = a.x() * b.y() - b.x() * a.y();
        twice_area += c;
        first += (a + b) * c;
        sxx += c * (a.x() * a.x() + a.x() * b.x() + b.x() * b.x());
        syy += c * (a.y() * a.y() + a.y() * b.y() + b.y() * b.y());
        sxy += c * (a.x() * b.y() + 2.0 * a.x() * a.y() + 2.0 * b.x() * b.y() + b.x() * a.y());
    }
    const double area = twice_area / 2.0;
    const Vec2 c = first / (6.0 * area);
    Eigen::Matrix2d cov;
    cov(0, 0) = sxx / (12.0 * area) - c.x() * c.x();
    cov(1, 1) = syy / (12.0 * area) - c.y() * c.y();
    cov(0, 1) = cov(1, 0) = sxy / (24.0 * area) - c.x() * c.y();
    return axes_from_covariance(cov, polygon);
}

DefectEstimate estimate_defect(std::span<const FixationEvent> fixations, const DefectConfig& config) {
    const AverageNormal avg = average_normal(fixations);
    const EulerAngles euler = euler_from_normal(avg.normal);
    const std::vector<Vec2> projected = project_fixations(fixations, euler);
    const ConvexHull hull = convex_hull(projected);
    const PrincipalAxes axes = region_principal_axes(hull.vertices);

    const Mat3 to_world = surface_to_world(euler);
    double depth = 0.0;
    for (const auto& f : fixations) depth += (to_world.transpose() * f.centroid).z();
    depth /= static_cast<double>(fixations.size());
    const Vec2 c2 = polygon_centroid(hull.vertices);

    DefectEstimate d;
    d.center = to_world * Vec3(c2.x(), c2.y(), depth);
    d.avg_normal = avg.normal;
    d.normal_fallback = avg.fallback;
    d.theta_x_deg = euler.theta_x_deg;
    d.theta_y_deg = euler.theta_y_deg;
    d.w_m = axes.w_m;
    d.h_m = axes.h_m;
    d.theta_z_deg = axes.theta_z_deg;
    d.area_m2 = hull.area_m2;
    d.kind = d.h_m < config.crack_width_m ? DefectKind::Crack : DefectKind::AreaDefect;
    d.orientation = std::abs(d.theta_x_deg) >= config.vertical_threshold_deg ? DefectOrientation::Vertical
                                                                             : DefectOrientation::Horizontal;
    return d;
}

CollectionProgress FixationCollection::append(const FixationEvent& f) {
    fixations_.push_back(f);
    const EulerAngles euler = euler_from_normal(average_normal(fixations_).normal);
    const std::vector<Vec2> projected = project_fixations(fixations_, euler);
    hull_area_history_.push_back(convex_hull(projected).area_m2);
    return {fixations_.size(), hull_area_history_.back(), should_stop()};
}

bool FixationCollection::should_stop() const {
    return gazeinspect::should_stop(hull_area_history_);
}

DefectEstimate FixationCollection::estimate(const DefectConfig& config) const {
    return estimate_defect(fixations_, config);
}

}  // namespace gazeinspect
