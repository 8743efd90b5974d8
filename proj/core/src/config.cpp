#include "gazeinspect/config.hpp"

#include <fstream>
#include <stdexcept>

namespace gazeinspect {

void PipelineConfig::validate() const {
    dispersion.validate();
    attention.validate();
    camera.validate();
    if (!(defect.crack_width_m >= 0.0)) throw std::domain_error("crack width must be non-negative");
}

nlohmann::json to_json(const PipelineConfig& c) {
    const auto& t = c.attention.thresholds;
    return {
        {"dispersion", {{"angle_deg", c.dispersion.dispersion_angle_deg},
                        {"min_samples", c.dispersion.min_fixation_samples},
                        {"sample_rate_hz", c.dispersion.sample_rate_hz}}},
        {"attention", {{"window_s", c.attention.window_s},
                       {"focusing_fr", t.focusing_fr},
                       {"focusing_msl_m", t.focusing_msl_m},
                       {"inspecting_fr", t.inspecting_fr},
                       {"inspecting_msl_m", t.inspecting_msl_m},
                       {"inspecting_mfd_ms", t.inspecting_mfd_ms},
                       {"min_dwell_ms", c.attention.min_dwell_ms}}},
        {"camera", {{"theta_h_deg", c.camera.theta_h_deg},
                    {"theta_v_deg", c.camera.theta_v_deg},
                    {"aspect_ratio", c.camera.aspect_ratio},
                    {"safety_factor", c.camera.safety_factor},
                    {"distance_formula", std::string(to_string(c.camera.distance_formula))}}},
        {"crack_width_m", c.defect.crack_width_m},
    };
}

PipelineConfig pipeline_config_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
    PipelineConfig c;

    if (auto it = j.find("dispersion"); it != j.end()) {
        c.dispersion.dispersion_angle_deg = it->value("angle_deg", c.dispersion.dispersion_angle_deg);
        c.dispersion.min_fixation_samples = it->value("min_samples", c.dispersion.min_fixation_samples);
        c.dispersion.sample_rate_hz = it->value("sample_rate_hz", c.dispersion.sample_rate_hz);
    }
    if (auto it = j.find("attention"); it != j.end()) {
        auto& t = c.attention.thresholds;
        c.attention.window_s = it->value("window_s", c.attention.window_s);
        t.focusing_fr = it->value("focusing_fr", t.focusing_fr);
        t.focusing_msl_m = it->value("focusing_msl_m", t.focusing_msl_m);
        t.inspecting_fr = it->value("inspecting_fr", t.inspecting_fr);
        t.inspecting_msl_m = it->value("inspecting_msl_m", t.inspecting_msl_m);
        t.inspecting_mfd_ms = it->value("inspecting_mfd_ms", t.inspecting_mfd_ms);
        c.attention.min_dwell_ms = it->value("min_dwell_ms", c.attention.min_dwell_ms);
    }
    if (auto it = j.find("camera"); it != j.end()) {
        c.camera.theta_h_deg = it->value("theta_h_deg", c.camera.theta_h_deg);
        c.camera.theta_v_deg = it->value("theta_v_deg", c.camera.theta_v_deg);
        c.camera.aspect_ratio = it->value("aspect_ratio", c.camera.aspect_ratio);
        c.camera.safety_factor = it->value("safety_factor", c.camera.safety_factor);
        if (auto f = it->find("distance_formula"); f != it->end())
            c.camera.distance_formula = distance_formula_from_string(f->get<std::string>());
    }
    c.defect.crack_width_m = j.value("crack_width_m", c.defect.crack_width_m);
    c.camera.vertical_threshold_deg = c.defect.vertical_threshold_deg;

    c.validate();
    return c;
}

PipelineConfig load_pipeline_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file " + path.string());
    return pipeline_config_from_json(nlohmann::json::parse(in));
}

}  // namespace gazeinspect
