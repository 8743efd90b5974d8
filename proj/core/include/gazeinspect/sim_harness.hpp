#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gazeinspect/config.hpp"

namespace gazeinspect::sim {

/// Planar wall. Wall coordinates (u, v) map to `center + u * right + v * up()`.
struct Wall {
    Vec3 center{0.0, 0.0, 2.0};
    Vec3 normal{0.0, 0.0, -1.0};  // towards the viewer
    Vec3 right{1.0, 0.0, 0.0};
    double width_m{3.5};
    double height_m{2.0};

    Vec3 up() const { return normal.cross(right); }
    Vec3 to_world(const Vec2& p) const { return center + p.x() * right + p.y() * up(); }
    bool contains(const Vec2& p) const {
        return std::abs(p.x()) <= width_m / 2.0 && std::abs(p.y()) <= height_m / 2.0;
    }
};

struct DefectSpec {
    std::string id;
    std::vector<Vec2> polygon;  // convex, wall coordinates
};

struct ScenePlan {
    Wall wall{};
    std::vector<DefectSpec> defects;
    std::size_t distractor_count{0};

    void validate() const;
    const DefectSpec& defect(const std::string& id) const;
};

enum class Phase { Scan, Focus, Inspect };
const char* to_string(Phase p);

struct ScriptPhase {
    Phase phase{Phase::Scan};
    std::optional<std::string> target;
    double duration_s{0.0};
};

struct Range {
    double lo{0.0};
    double hi{0.0};
};

struct InspectorScript {
    std::vector<ScriptPhase> phases;
    Vec3 viewpoint{0.0, 0.0, 0.0};
    Range scan_fixation_ms{180.0, 275.0};
    Range focus_fixation_ms{180.0, 275.0};
    Range inspect_fixation_ms{300.0, 400.0};
    Range saccade_amplitude_deg{4.0, 5.0};
    Range scan_transit_ms{250.0, 450.0};  // in-flight time between scan fixations
    double boundary_step_m{0.09};
    double interior_probability{0.2};
    double interior_reach_m{0.2};  // interior glances land within this distance of the current gaze
    double jitter_fraction{0.3};  // per-sample jitter radius as a fraction of the dispersion radius
    double dispersion_angle_deg{2.86};

    void validate(const ScenePlan& scene) const;
    double total_duration_s() const;
};

/// Scan, focus, inspect for every defect in order, then a closing scan.
InspectorScript default_script(const ScenePlan& scene, double viewing_distance_m = 2.0);

/// Fixation position error grows linearly with viewing distance between two
/// measured anchors. Each fixation gets one isotropic in-plane Gaussian offset.
struct NoiseModel {
    double near_distance_m{1.0};
    double near_error_m{0.008};
    double far_distance_m{5.5};
    double far_error_m{0.0337};
    double scale{1.0};
    std::uint64_t seed{0};

    double mean_error(double distance_m) const;
    /// Per-axis sigma whose 2D radial mean equals mean_error.
    double sigma(double distance_m) const;
};

struct PhaseSpan {
    Phase phase{Phase::Scan};
    std::optional<std::string> target;
    TimestampUs start_us{0};
    TimestampUs end_us{0};
};

struct GeneratedStream {
    std::vector<GazeSample> samples;
    std::vector<PhaseSpan> phases;
};

GeneratedStream generate_stream(const ScenePlan& scene, const InspectorScript& script,
                                const NoiseModel& noise, double rate_hz, std::uint64_t seed);

struct GroundTruth {
    double area_m2{0.0};
    DefectEstimate defect{};
    DronePose pose{};
};

GroundTruth ground_truth_pose(const std::vector<Vec2>& polygon, const Wall& wall, const CameraConfig& camera,
                              const DefectConfig& defect_config = {});

struct TrialReport {
    std::size_t trial{0};
    std::string defect_id;
    bool failed{false};
    std::string failure;
    double true_area_m2{0.0};
    double est_area_m2{0.0};
    double delta_a_pct{0.0};
    DronePose true_pose{};
    DronePose est_pose{};
    double delta_d_z_pct{0.0};
    double delta_d_xy_pct{0.0};
    double collection_time_s{0.0};
};

nlohmann::json to_json(const TrialReport& r);

struct Simulation {
    ScenePlan scene;
    InspectorScript script;
    NoiseModel noise;
    PipelineConfig pipeline;
    double rate_hz{60.0};
};

/// Runs the full pipeline over `n_trials` independently seeded streams and
/// reports one entry per inspect phase, ordered by (trial, phase).
std::vector<TrialReport> run_trials(const Simulation& sim, std::size_t n_trials, std::uint64_t seed);

/// Fills scene, script, noise, pipeline and rate from a JSON document; the
/// script defaults to default_script() when it names no phases.
Simulation simulation_from_json(const nlohmann::json& j);
Simulation load_simulation(const std::filesystem::path& path);
nlohmann::json to_json(const ScenePlan& scene);

/// Sixteen elongated convex outlines of 600-1400 cm^2 with a longest side under 50 cm,
/// centred at the origin; `scale` multiplies lengths.
std::vector<std::vector<Vec2>> reference_defect_shapes(double scale = 1.0);

}  // namespace gazeinspect::sim
