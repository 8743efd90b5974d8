#pragma once

#include <filesystem>

#include <nlohmann/json.hpp>

#include "gazeinspect/attention.hpp"
#include "gazeinspect/defect_eval.hpp"
#include "gazeinspect/gaze_core.hpp"
#include "gazeinspect/pose_planner.hpp"

namespace gazeinspect {

/// Everything one session pipeline needs. Serialized as the service config file:
///
///   {"dispersion": {"angle_deg", "min_samples"},
///    "attention":  {"window_s", "focusing_fr", "focusing_msl_m", "inspecting_fr",
///                   "inspecting_msl_m", "inspecting_mfd_ms", "min_dwell_ms"},
///    "camera":     {"theta_h_deg", "theta_v_deg", "aspect_ratio", "safety_factor",
///                   "distance_formula": "corrected" | "literal"},
///    "crack_width_m": 0.05}
///
/// Missing keys keep their defaults.
struct PipelineConfig {
    DispersionConfig dispersion{};
    AttentionConfig attention{};
    CameraConfig camera{};
    DefectConfig defect{};

    void validate() const;
};

nlohmann::json to_json(const PipelineConfig& c);
PipelineConfig pipeline_config_from_json(const nlohmann::json& j);
PipelineConfig load_pipeline_config(const std::filesystem::path& path);

}  // namespace gazeinspect
