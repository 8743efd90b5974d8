#include "gazeinspect/wire.hpp"

#include <cmath>

namespace gazeinspect::wire {

using nlohmann::json;

namespace {

json vec(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

// JSON has no infinity; +inf MSL (fewer than two fixations) goes out as null.
json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

Vec3 read_vec3(const json& frame, const char* key) {
    const auto it = frame.find(key);
    if (it == frame.end()) throw BadMessage(std::string("missing field '") + key + "'");
    if (!it->is_array() || it->size() != 3) throw BadMessage(std::string("'") + key + "' must be a 3-array");
    Vec3 v;
    for (int i = 0; i < 3; ++i) {
        if (!(*it)[i].is_number()) throw BadMessage(std::string("'") + key + "' must hold numbers");
        v[i] = (*it)[i].get<double>();
    }
    return v;
}

struct Encoder {
    json operator()(const FixationMsg& m) const {
        return {{"type", "fixation"}, {"centroid", vec(m.centroid)}, {"duration_ms", m.duration_ms}};
    }
    json operator()(const AttentionMsg& m) const {
        return {{"type", "attention"},
                {"level", std::string(to_string(m.level))},
                {"fr", m.metrics.fr},
                {"mfd_ms", m.metrics.mfd_ms},
                {"msl_m", finite_or_null(m.metrics.msl_m)},
                {"t_us", m.t_us}};
    }
    json operator()(const CollectionMsg& m) const {
        return {{"type", "collection"},
                {"n_fixations", m.progress.n_fixations},
                {"hull_area_m2", m.progress.hull_area_m2},
                {"stopped", m.progress.stopped}};
    }
    json operator()(const PoseMsg& m) const {
        const auto& d = m.defect;
        return {{"type", "pose"},
                {"defect", {{"w", d.w_m},
                            {"h", d.h_m},
                            {"theta_z_deg", d.theta_z_deg},
                            {"area_m2", d.area_m2},
                            {"kind", std::string(to_string(d.kind))},
                            {"orientation", std::string(to_string(d.orientation))},
                            {"center", vec(d.center)}}},
                {"position", vec(m.pose.position)},
                {"pan_deg", m.pose.pan_deg},
                {"tilt_deg", m.pose.tilt_deg},
                {"standoff_m", m.pose.standoff_m}};
    }
    json operator()(const ErrorMsg& m) const {
        return {{"type", "error"}, {"code", m.code}, {"detail", m.detail}};
    }
};

}  // namespace

json encode(const Outbound& msg, std::uint64_t seq, std::string_view session_id) {
    json j = std::visit(Encoder{}, msg);
    j["seq"] = seq;
    j["session"] = session_id;
    return j;
}

Inbound decode_inbound(const json& frame) {
    if (!frame.is_object()) throw BadMessage("frame must be a JSON object");
    const auto type = frame.find("type");
    if (type == frame.end() || !type->is_string()) throw BadMessage("missing string field 'type'");

    if (*type == "hello") {
        const auto v = frame.find("version");
        if (v == frame.end() || !v->is_number_integer()) throw BadMessage("hello needs an integer 'version'");
        return HelloMsg{v->get<int>()};
    }
    if (*type != "gaze") throw BadMessage("unknown frame type '" + type->get<std::string>() + "'");

    const auto t = frame.find("t_us");
    if (t == frame.end() || !t->is_number_integer()) throw BadMessage("'t_us' must be an integer");
    GazeSample s;
    s.t_us = t->get<std::int64_t>();
    s.origin = read_vec3(frame, "origin");
    s.hit = read_vec3(frame, "hit");
    s.normal = read_vec3(frame, "normal");
    return s;
}

json encode_gaze(const GazeSample& s) {
    return {{"type", "gaze"}, {"t_us", s.t_us}, {"origin", vec(s.origin)}, {"hit", vec(s.hit)},
            {"normal", vec(s.normal)}};
}

json comparable(json frame) {
    if (frame.is_object()) frame.erase("session");
    return frame;
}

}  // namespace gazeinspect::wire
