#include "gazeinspect/sim_harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <stdexcept>

#include "gazeinspect/pipeline.hpp"

namespace gazeinspect::sim {

using nlohmann::json;

namespace {

std::vector<Vec2> regular_polygon(std::size_t n, double radius, double phase_deg = 0.0) {
    std::vector<Vec2> out;
    for (std::size_t i = 0; i < n; ++i) {
        const double a = deg_to_rad(phase_deg) + 2.0 * std::numbers::pi * static_cast<double>(i) / n;
        out.emplace_back(radius * std::cos(a), radius * std::sin(a));
    }
    return out;
}

std::vector<Vec2> ellipse(std::size_t n, double a, double b, double rot_deg) {
    const Eigen::Rotation2Dd rot(deg_to_rad(rot_deg));
    std::vector<Vec2> out;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = 2.0 * std::numbers::pi * static_cast<double>(i) / n;
        out.push_back(rot * Vec2(a * std::cos(t), b * std::sin(t)));
    }
    return out;
}

std::vector<Vec2> rectangle(double w, double h, double rot_deg = 0.0) {
    const Eigen::Rotation2Dd rot(deg_to_rad(rot_deg));
    return {rot * Vec2(-w / 2, -h / 2), rot * Vec2(w / 2, -h / 2), rot * Vec2(w / 2, h / 2),
            rot * Vec2(-w / 2, h / 2)};
}

std::vector<Vec2> centred(std::vector<Vec2> poly) {
    const Vec2 c = polygon_centroid(poly);
    for (auto& p : poly) p -= c;
    return poly;
}

double bounding_radius(const std::vector<Vec2>& poly, const Vec2& centre) {
    double r = 0.0;
    for (const auto& p : poly) r = std::max(r, (p - centre).norm());
    return r;
}

bool inside_convex(const std::vector<Vec2>& poly, const Vec2& p) {
    // orientation-agnostic: all edge cross products share a sign
    int sign = 0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Vec2& a = poly[i];
        const Vec2& b = poly[(i + 1) % poly.size()];
        const double c = (b.x() - a.x()) * (p.y() - a.y()) - (b.y() - a.y()) * (p.x() - a.x());
        const int s = (c > 0) - (c < 0);
        if (s == 0) continue;
        if (sign == 0) sign = s;
        else if (s != sign) return false;
    }
    return true;
}

Phase phase_from_string(const std::string& s) {
    if (s == "scan") return Phase::Scan;
    if (s == "focus") return Phase::Focus;
    if (s == "inspect") return Phase::Inspect;
    throw std::invalid_argument("unknown script phase '" + s + "'");
}

Vec3 read_vec3(const json& j) {
    if (!j.is_array() || j.size() != 3) throw std::invalid_argument("expected a 3-array");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

Range read_range(const json& parent, const char* key, Range fallback) {
    const auto it = parent.find(key);
    if (it == parent.end()) return fallback;
    if (!it->is_array() || it->size() != 2) throw std::invalid_argument(std::string(key) + " must be [lo, hi]");
    return {(*it)[0].get<double>(), (*it)[1].get<double>()};
}

json pose_json(const DronePose& p) {
    return {{"position", {p.position.x(), p.position.y(), p.position.z()}},
            {"pan_deg", p.pan_deg},
            {"tilt_deg", p.tilt_deg},
            {"standoff_m", p.standoff_m}};
}

/// Emits gaze samples on a fixed-rate clock and remembers where the eye is.
class StreamWriter {
public:
    StreamWriter(const ScenePlan& scene, const InspectorScript& script, const NoiseModel& noise,
                 double rate_hz, std::uint64_t seed)
        : scene_(scene), script_(script), noise_(noise), rate_hz_(rate_hz), rng_(make_seed(seed, noise.seed)) {}

    TimestampUs now() const { return time_of(index_); }
    const Vec2& gaze() const { return gaze_; }
    std::mt19937_64& rng() { return rng_; }

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    double uniform(const Range& r) { return r.lo == r.hi ? r.lo : uniform(r.lo, r.hi); }

    double distance_to(const Vec2& p) const { return (scene_.wall.to_world(p) - script_.viewpoint).norm(); }
    double dispersion_radius_at(const Vec2& p) const {
        return dispersion_diameter(distance_to(p), script_.dispersion_angle_deg) / 2.0;
    }

    /// One fixation of `duration_ms` at `target`, truncated at `deadline`.
    void fixation(const Vec2& target, double duration_ms, TimestampUs deadline) {
        const double sigma = noise_.sigma(distance_to(target));
        std::normal_distribution<double> gauss(0.0, 1.0);
        const Vec2 offset = sigma > 0.0 ? Vec2(sigma * gauss(rng_), sigma * gauss(rng_)) : Vec2::Zero();
        const double jitter = script_.jitter_fraction * dispersion_radius_at(target);
        std::size_t n = static_cast<std::size_t>(std::max<long>(1, std::lround(duration_ms * rate_hz_ / 1000.0)));
        std::size_t room = 0;
        while (room < n && time_of(index_ + room) < deadline) ++room;
        n = room;

        // tremor around the fixated point; zero-mean so that all position
        // error of the fixation comes from the noise model
        std::vector<Vec2> wobble(n);
        Vec2 mean = Vec2::Zero();
        for (auto& j : wobble) {
            const double r = jitter * std::sqrt(uniform(0.0, 1.0));
            const double a = uniform(0.0, 2.0 * std::numbers::pi);
            j = Vec2(r * std::cos(a), r * std::sin(a));
            mean += j;
        }
        if (n > 0) mean /= static_cast<double>(n);
        for (const auto& j : wobble) emit(target + offset + j - mean);
        gaze_ = target;
    }

    /// A run of single in-flight samples, each one saccade amplitude from the last.
    void transit(double duration_ms, TimestampUs deadline) {
        const auto n = std::lround(duration_ms * rate_hz_ / 1000.0);
        Vec2 p = gaze_;
        for (long i = 0; i < n && now() < deadline; ++i) {
            const double amp = deg_to_rad(uniform(script_.saccade_amplitude_deg));
            const double step = 2.0 * distance_to(p) * std::tan(amp / 2.0);
            Vec2 next = p;
            for (int attempt = 0; attempt < 16; ++attempt) {
                const double a = uniform(0.0, 2.0 * std::numbers::pi);
                next = p + step * Vec2(std::cos(a), std::sin(a));
                if (scene_.wall.contains(next)) break;
            }
            next = clamp_to_wall(next);
            emit(next);
            p = next;
        }
        gaze_ = p;
    }

    Vec2 clamp_to_wall(const Vec2& p) const {
        const double hw = scene_.wall.width_m / 2.0, hh = scene_.wall.height_m / 2.0;
        return {std::clamp(p.x(), -hw, hw), std::clamp(p.y(), -hh, hh)};
    }

    Vec2 random_wall_point() {
        return {uniform(-scene_.wall.width_m / 2.0, scene_.wall.width_m / 2.0),
                uniform(-scene_.wall.height_m / 2.0, scene_.wall.height_m / 2.0)};
    }

    std::vector<GazeSample> take() { return std::move(samples_); }

private:
    static std::seed_seq::result_type fold(std::uint64_t x, int shift) {
        return static_cast<std::seed_seq::result_type>((x >> shift) & 0xffffffffu);
    }
    static std::mt19937_64 make_seed(std::uint64_t seed, std::uint64_t noise_seed) {
        std::seed_seq seq{fold(seed, 0), fold(seed, 32), fold(noise_seed, 0), fold(noise_seed, 32)};
        return std::mt19937_64(seq);
    }

    TimestampUs time_of(std::size_t k) const {
        return static_cast<TimestampUs>(std::llround(static_cast<double>(k) * 1e6 / rate_hz_));
    }

    void emit(const Vec2& p) {
        GazeSample s;
        s.t_us = now();
        s.origin = script_.viewpoint;
        s.hit = scene_.wall.to_world(p);
        s.normal = scene_.wall.normal;
        samples_.push_back(s);
        ++index_;
    }

    const ScenePlan& scene_;
    const InspectorScript& script_;
    const NoiseModel& noise_;
    double rate_hz_;
    std::mt19937_64 rng_;
    std::size_t index_{0};
    Vec2 gaze_{Vec2::Zero()};
    std::vector<GazeSample> samples_;
};

/// Stations around the outline: every vertex plus evenly spaced edge points no
/// further apart than `step`.
std::vector<Vec2> outline_stations(const std::vector<Vec2>& poly, double step) {
    std::vector<Vec2> out;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Vec2& a = poly[i];
        const Vec2& b = poly[(i + 1) % poly.size()];
        const auto pieces = std::max<long>(1, std::lround(std::ceil((b - a).norm() / step)));
        for (long k = 0; k < pieces; ++k) out.push_back(a + (b - a) * (static_cast<double>(k) / pieces));
    }
    return out;
}

}  // namespace

const char* to_string(Phase p) {
    switch (p) {
        case Phase::Scan: return "scan";
        case Phase::Focus: return "focus";
        case Phase::Inspect: return "inspect";
    }
    return "scan";
}


void ScenePlan::validate() const {
    if (!is_unit(wall.normal) || !is_unit(wall.right) || std::abs(wall.normal.dot(wall.right)) > 1e-9)
        throw std::invalid_argument("wall normal and right axis must be orthonormal");
    if (!(wall.width_m > 0.0 && wall.height_m > 0.0)) throw std::invalid_argument("wall extents must be positive");
    for (const auto& d : defects) {
        if (d.polygon.size() < 3) throw std::invalid_argument("defect " + d.id + " needs at least 3 vertices");
        for (const auto& p : d.polygon)
            if (!wall.contains(p)) throw std::invalid_argument("defect " + d.id + " leaves the wall");
        if (shoelace_area(d.polygon) <= 0.0) throw std::invalid_argument("defect " + d.id + " has zero area");
        if (convex_hull(d.polygon).vertices.size() != d.polygon.size())
            throw std::invalid_argument("defect " + d.id + " is not strictly convex");
    }
}

const DefectSpec& ScenePlan::defect(const std::string& id) const {
    for (const auto& d : defects)
        if (d.id == id) return d;
    throw std::invalid_argument("unknown defect id '" + id + "'");
}

void InspectorScript::validate(const ScenePlan& scene) const {
    for (const auto& p : phases) {
        if (!(p.duration_s > 0.0)) throw std::invalid_argument("phase durations must be positive");
        if (p.phase != Phase::Scan) {
            if (!p.target) throw std::invalid_argument("focus and inspect phases need a target defect");
            (void)scene.defect(*p.target);
        }
    }
    for (const Range& r : {scan_fixation_ms, focus_fixation_ms, inspect_fixation_ms, saccade_amplitude_deg,
                           scan_transit_ms})
        if (r.lo < 0.0 || r.hi < r.lo) throw std::invalid_argument("script ranges must satisfy 0 <= lo <= hi");
    if (!(boundary_step_m > 0.0)) throw std::invalid_argument("boundary step must be positive");
    if (interior_probability < 0.0 || interior_probability > 1.0)
        throw std::invalid_argument("interior probability must be in [0, 1]");
    if (!(interior_reach_m > 0.0)) throw std::invalid_argument("interior reach must be positive");
}

double InspectorScript::total_duration_s() const {
    double t = 0.0;
    for (const auto& p : phases) t += p.duration_s;
    return t;
}

InspectorScript default_script(const ScenePlan& scene, double viewing_distance_m) {
    InspectorScript s;
    s.viewpoint = scene.wall.center + scene.wall.normal * viewing_distance_m;
    for (const auto& d : scene.defects) {
        s.phases.push_back({Phase::Scan, std::nullopt, 8.0});
        s.phases.push_back({Phase::Focus, d.id, 8.0});
        s.phases.push_back({Phase::Inspect, d.id, 25.0});
    }
    s.phases.push_back({Phase::Scan, std::nullopt, 8.0});
    return s;
}

double NoiseModel::mean_error(double distance_m) const {
    const double slope = (far_error_m - near_error_m) / (far_distance_m - near_distance_m);
    return std::max(0.0, scale * (near_error_m + slope * (distance_m - near_distance_m)));
}

double NoiseModel::sigma(double distance_m) const {
    return mean_error(distance_m) / std::sqrt(std::numbers::pi / 2.0);
}

GeneratedStream generate_stream(const ScenePlan& scene, const InspectorScript& script, const NoiseModel& noise,
                                double rate_hz, std::uint64_t seed) {
    if (!(rate_hz > 0.0)) throw std::domain_error("sample rate must be positive");
    scene.validate();
    script.validate(scene);

    StreamWriter w(scene, script, noise, rate_hz, seed);
    GeneratedStream out;
    TimestampUs phase_start = 0;
    double elapsed_s = 0.0;
    bool at_rest = true;

    for (const auto& phase : script.phases) {
        elapsed_s += phase.duration_s;
        const auto deadline = static_cast<TimestampUs>(std::llround(elapsed_s * 1e6));

        switch (phase.phase) {
            case Phase::Scan: {
                std::vector<Vec2> distractors;
                std::mt19937_64 layout(static_cast<std::uint64_t>(scene.distractor_count) * 7919u + 17u);
                std::uniform_real_distribution<double> ux(-scene.wall.width_m / 2, scene.wall.width_m / 2);
                std::uniform_real_distribution<double> uy(-scene.wall.height_m / 2, scene.wall.height_m / 2);
                for (std::size_t i = 0; i < scene.distractor_count; ++i) distractors.emplace_back(ux(layout), uy(layout));

                while (w.now() < deadline) {
                    if (!at_rest) w.transit(w.uniform(script.scan_transit_ms), deadline);
                    at_rest = false;
                    if (w.now() >= deadline) break;
                    Vec2 target = w.random_wall_point();
                    if (!distractors.empty() && w.uniform(0.0, 1.0) < 0.5)
                        target = distractors[static_cast<std::size_t>(w.uniform(0.0, 1.0) * distractors.size()) %
                                             distractors.size()];
                    w.fixation(target, w.uniform(script.scan_fixation_ms), deadline);
                }
                break;
            }
            case Phase::Focus: {
                const auto& poly = scene.defect(*phase.target).polygon;
                const Vec2 c = polygon_centroid(poly);
                const double radius = 2.0 * bounding_radius(poly, c);
                while (w.now() < deadline) {
                    const double min_step = 2.0 * w.dispersion_radius_at(c);
                    Vec2 target = c;
                    for (int attempt = 0; attempt < 32; ++attempt) {
                        const double r = radius * std::sqrt(w.uniform(0.0, 1.0));
                        const double a = w.uniform(0.0, 2.0 * std::numbers::pi);
                        target = w.clamp_to_wall(c + Vec2(r * std::cos(a), r * std::sin(a)));
                        if ((target - w.gaze()).norm() >= min_step) break;
                    }
                    w.fixation(target, w.uniform(script.focus_fixation_ms), deadline);
                }
                at_rest = false;
                break;
            }
            case Phase::Inspect: {
                const auto& poly = scene.defect(*phase.target).polygon;
                const Vec2 c = polygon_centroid(poly);
                const double min_step = 1.6 * w.dispersion_radius_at(c);
                const auto stations = outline_stations(poly, std::max(script.boundary_step_m, min_step));
                auto next = static_cast<std::size_t>(w.uniform(0.0, 1.0) * stations.size()) % stations.size();
                // interior glances stay local, as scrutiny saccades are short
                const double reach = std::max(script.interior_reach_m, 2.0 * min_step);
                Eigen::AlignedBox2d box;
                for (const auto& p : poly) box.extend(p);

                while (w.now() < deadline) {
                    Vec2 target = stations[next];
                    if (w.uniform(0.0, 1.0) < script.interior_probability) {
                        for (int attempt = 0; attempt < 64; ++attempt) {
                            const Vec2 p(w.uniform(box.min().x(), box.max().x()),
                                         w.uniform(box.min().y(), box.max().y()));
                            const double jump = (p - w.gaze()).norm();
                            if (inside_convex(poly, p) && jump >= min_step && jump <= reach) {
                                target = p;
                                break;
                            }
                        }
                    } else {
                        next = (next + 1) % stations.size();
                    }
                    w.fixation(target, w.uniform(script.inspect_fixation_ms), deadline);
                }
                at_rest = false;
                break;
            }
        }
        out.phases.push_back({phase.phase, phase.target, phase_start, deadline});
        phase_start = deadline;
    }
    out.samples = w.take();
    return out;
}

GroundTruth ground_truth_pose(const std::vector<Vec2>& polygon, const Wall& wall, const CameraConfig& camera,
                              const DefectConfig& defect_config) {
    if (polygon.size() < 3 || shoelace_area(polygon) <= 0.0)
        throw DegenerateGeometry("ground truth needs a polygon with positive area");

    const EulerAngles euler = euler_from_normal(wall.normal);
    const Mat3 to_world = surface_to_world(euler);
    const Vec3 e1 = to_world.col(0), e2 = to_world.col(1);

    std::vector<Vec2> in_view;
    for (const auto& p : polygon) {
        const Vec3 q = wall.to_world(p);
        in_view.emplace_back(q.dot(e1), q.dot(e2));
    }
    const PrincipalAxes axes = region_principal_axes(convex_hull(in_view).vertices);

    GroundTruth gt;
    gt.area_m2 = shoelace_area(polygon);
    DefectEstimate& d = gt.defect;
    d.center = wall.to_world(polygon_centroid(polygon));
    d.avg_normal = wall.normal;
    d.theta_x_deg = euler.theta_x_deg;
    d.theta_y_deg = euler.theta_y_deg;
    d.w_m = axes.w_m;
    d.h_m = axes.h_m;
    d.theta_z_deg = axes.theta_z_deg;
    d.area_m2 = gt.area_m2;
    d.kind = d.h_m < defect_config.crack_width_m ? DefectKind::Crack : DefectKind::AreaDefect;
    d.orientation = std::abs(d.theta_x_deg) >= defect_config.vertical_threshold_deg ? DefectOrientation::Vertical
                                                                                   : DefectOrientation::Horizontal;
    gt.pose = plan_pose(d, camera);
    return gt;
}

json to_json(const TrialReport& r) {
    json j = {{"trial", r.trial},
              {"defect_id", r.defect_id},
              {"failed", r.failed},
              {"true_area_m2", r.true_area_m2},
              {"true_pose", pose_json(r.true_pose)}};
    if (r.failed) {
        j["failure"] = r.failure;
        return j;
    }
    j["est_area_m2"] = r.est_area_m2;
    j["delta_A_pct"] = r.delta_a_pct;
    j["delta_d_z_pct"] = r.delta_d_z_pct;
    j["delta_d_xy_pct"] = r.delta_d_xy_pct;
    j["collection_time_s"] = r.collection_time_s;
    j["est_pose"] = pose_json(r.est_pose);
    return j;
}

std::vector<TrialReport> run_trials(const Simulation& sim, std::size_t n_trials, std::uint64_t seed) {
    sim.scene.validate();
    sim.script.validate(sim.scene);

    struct PoseAt {
        TimestampUs t_us;
        double collection_s;
        wire::PoseMsg msg;
    };

    std::vector<TrialReport> reports;
    for (std::size_t trial = 0; trial < n_trials; ++trial) {
        const GeneratedStream stream = generate_stream(sim.scene, sim.script, sim.noise, sim.rate_hz, seed + trial);

        InspectionPipeline pipeline(sim.pipeline);
        std::vector<PoseAt> poses;
        TimestampUs last_t = 0, collection_start = 0;
        auto consume = [&](const std::vector<wire::Outbound>& msgs) {
            for (const auto& m : msgs) {
                if (const auto* a = std::get_if<wire::AttentionMsg>(&m)) last_t = a->t_us;
                if (const auto* c = std::get_if<wire::CollectionMsg>(&m); c && c->progress.n_fixations == 1)
                    collection_start = last_t;
                if (const auto* p = std::get_if<wire::PoseMsg>(&m))
                    poses.push_back({last_t, static_cast<double>(last_t - collection_start) / 1e6, *p});
            }
        };
        for (const auto& s : stream.samples) consume(pipeline.process(s));
        consume(pipeline.flush());

        const auto window_us = static_cast<TimestampUs>(sim.pipeline.attention.window_s * 1e6);
        std::size_t next_pose = 0;
        for (const auto& span : stream.phases) {
            if (span.phase != Phase::Inspect) continue;
            TrialReport r;
            r.trial = trial;
            r.defect_id = *span.target;
            const GroundTruth gt = ground_truth_pose(sim.scene.defect(r.defect_id).polygon, sim.scene.wall,
                                                     sim.pipeline.camera, sim.pipeline.defect);
            r.true_area_m2 = gt.area_m2;
            r.true_pose = gt.pose;

            while (next_pose < poses.size() && poses[next_pose].t_us < span.start_us) ++next_pose;
            if (next_pose >= poses.size() || poses[next_pose].t_us > span.end_us + window_us) {
                r.failed = true;
                r.failure = "no pose produced during the inspect phase";
                reports.push_back(std::move(r));
                continue;
            }
            const PoseAt& p = poses[next_pose++];
            const Vec3 n = sim.scene.wall.normal;
            const double d = gt.pose.standoff_m;
            const Vec3 drift = p.msg.pose.position - gt.pose.position;
            const double depth = (p.msg.pose.position - gt.defect.center).dot(n);

            r.est_area_m2 = p.msg.defect.area_m2;
            r.est_pose = p.msg.pose;
            r.delta_a_pct = std::abs(r.est_area_m2 - r.true_area_m2) / r.true_area_m2 * 100.0;
            r.delta_d_z_pct = std::abs(depth - d) / d * 100.0;
            r.delta_d_xy_pct = (drift - drift.dot(n) * n).norm() / d * 100.0;
            r.collection_time_s = p.collection_s;
            reports.push_back(std::move(r));
        }
    }
    return reports;
}

json to_json(const ScenePlan& scene) {
    json defects = json::array();
    for (const auto& d : scene.defects) {
        json poly = json::array();
        for (const auto& p : d.polygon) poly.push_back({p.x(), p.y()});
        defects.push_back({{"id", d.id}, {"polygon", poly}});
    }
    const Wall& w = scene.wall;
    return {{"wall", {{"center", {w.center.x(), w.center.y(), w.center.z()}},
                      {"normal", {w.normal.x(), w.normal.y(), w.normal.z()}},
                      {"right", {w.right.x(), w.right.y(), w.right.z()}},
                      {"width_m", w.width_m},
                      {"height_m", w.height_m}}},
            {"defects", defects},
            {"distractor_count", scene.distractor_count}};
}

Simulation simulation_from_json(const json& j) {
    Simulation sim;
    if (auto it = j.find("wall"); it != j.end()) {
        Wall& w = sim.scene.wall;
        if (it->contains("center")) w.center = read_vec3(it->at("center"));
        if (it->contains("normal")) w.normal = read_vec3(it->at("normal")).normalized();
        if (it->contains("right")) w.right = read_vec3(it->at("right")).normalized();
        w.width_m = it->value("width_m", w.width_m);
        w.height_m = it->value("height_m", w.height_m);
    }
    if (auto it = j.find("defects"); it != j.end()) {
        for (const auto& d : *it) {
            DefectSpec spec;
            spec.id = d.at("id").get<std::string>();
            for (const auto& p : d.at("polygon")) spec.polygon.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
            sim.scene.defects.push_back(std::move(spec));
        }
    }
    sim.scene.distractor_count = j.value("distractor_count", std::size_t{0});
    sim.scene.validate();

    const json script = j.value("script", json::object());
    const double viewing_distance = script.value("viewing_distance_m", 2.0);
    sim.script = default_script(sim.scene, viewing_distance);
    if (auto it = script.find("phases"); it != script.end() && !it->empty()) {
        sim.script.phases.clear();
        for (const auto& p : *it) {
            ScriptPhase ph;
            ph.phase = phase_from_string(p.at("phase").get<std::string>());
            if (p.contains("target")) ph.target = p.at("target").get<std::string>();
            ph.duration_s = p.at("duration_s").get<double>();
            sim.script.phases.push_back(ph);
        }
    }
    if (script.contains("viewpoint")) sim.script.viewpoint = read_vec3(script.at("viewpoint"));
    sim.script.scan_fixation_ms = read_range(script, "scan_fixation_ms", sim.script.scan_fixation_ms);
    sim.script.focus_fixation_ms = read_range(script, "focus_fixation_ms", sim.script.focus_fixation_ms);
    sim.script.inspect_fixation_ms = read_range(script, "inspect_fixation_ms", sim.script.inspect_fixation_ms);
    sim.script.saccade_amplitude_deg = read_range(script, "saccade_amplitude_deg", sim.script.saccade_amplitude_deg);
    sim.script.scan_transit_ms = read_range(script, "scan_transit_ms", sim.script.scan_transit_ms);
    sim.script.boundary_step_m = script.value("boundary_step_m", sim.script.boundary_step_m);
    sim.script.interior_probability = script.value("interior_probability", sim.script.interior_probability);
    sim.script.interior_reach_m = script.value("interior_reach_m", sim.script.interior_reach_m);
    sim.script.jitter_fraction = script.value("jitter_fraction", sim.script.jitter_fraction);

    const json pipeline = j.value("pipeline", json::object());
    sim.pipeline = pipeline_config_from_json(pipeline);
    if (j.contains("camera")) {
        json merged = pipeline;
        merged["camera"] = j.at("camera");
        sim.pipeline = pipeline_config_from_json(merged);
    }
    sim.script.dispersion_angle_deg = sim.pipeline.dispersion.dispersion_angle_deg;
    sim.script.validate(sim.scene);

    if (auto it = j.find("noise"); it != j.end()) {
        NoiseModel& n = sim.noise;
        if (auto a = it->find("anchors"); a != it->end()) {
            if (!a->is_array() || a->size() != 2) throw std::invalid_argument("noise.anchors must hold two [distance, error] pairs");
            n.near_distance_m = (*a)[0].at(0).get<double>();
            n.near_error_m = (*a)[0].at(1).get<double>();
            n.far_distance_m = (*a)[1].at(0).get<double>();
            n.far_error_m = (*a)[1].at(1).get<double>();
        }
        n.scale = it->value("scale", n.scale);
        n.seed = it->value("seed", n.seed);
    }
    sim.rate_hz = j.value("rate_hz", sim.rate_hz);
    if (!(sim.rate_hz > 0.0)) throw std::domain_error("rate_hz must be positive");
    return sim;
}

Simulation load_simulation(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open scene file " + path.string());
    return simulation_from_json(json::parse(in));
}

std::vector<std::vector<Vec2>> reference_defect_shapes(double scale) {
    // all clearly elongated: an outline without a dominant axis has no
    // defined theta_z, and the framing then makes the standoff arbitrary
    std::vector<Vec2> octagon = regular_polygon(8, 0.20, 22.5);
    for (auto& p : octagon) p = Vec2(1.2 * p.x(), 0.75 * p.y());
    std::vector<std::vector<Vec2>> shapes = {
        rectangle(0.36, 0.22),
        rectangle(0.40, 0.25),
        rectangle(0.45, 0.15),
        rectangle(0.38, 0.26, 30.0),
        rectangle(0.40, 0.20, 60.0),
        {{-0.20, 0.0}, {-0.10, -0.13}, {0.10, -0.13}, {0.20, 0.0}, {0.10, 0.13}, {-0.10, 0.13}},
        octagon,
        {{-0.24, 0.0}, {0.24, 0.0}, {0.0, 0.27}},
        {{0.0, 0.0}, {0.35, 0.0}, {0.0, 0.35}},
        ellipse(24, 0.22, 0.15, 0.0),
        ellipse(16, 0.20, 0.12, 45.0),
        {{-0.22, -0.08}, {0.22, -0.08}, {0.24, 0.04}, {0.0, 0.14}, {-0.24, 0.04}},
        {{-0.225, 0.0}, {0.225, 0.0}, {0.125, 0.28}, {-0.125, 0.28}},
        {{0.0, 0.0}, {0.30, 0.0}, {0.38, 0.25}, {0.08, 0.25}},
        {{0.24, 0.0}, {0.0, 0.16}, {-0.24, 0.0}, {0.0, -0.16}},
        {{-0.18, -0.13}, {0.18, -0.13}, {0.21, -0.10}, {0.21, 0.10}, {0.18, 0.13}, {-0.18, 0.13},
         {-0.21, 0.10}, {-0.21, -0.10}},
    };
    for (auto& s : shapes) {
        s = centred(std::move(s));
        for (auto& p : s) p *= scale;
    }
    return shapes;
}

}  // namespace gazeinspect::sim
