#include "gazeinspect/report.hpp"

#include <algorithm>
#include <optional>

#include "gazeinspect/attention.hpp"

namespace gazeinspect {

using nlohmann::json;

SessionSummary summarize_frames(const std::vector<json>& outbound, std::int64_t first_t_us, std::int64_t last_t_us) {
    SessionSummary s;
    const std::int64_t span = std::max<std::int64_t>(0, last_t_us - first_t_us);
    s.duration_s = static_cast<double>(span) / 1e6;

    double occupancy[3] = {0.0, 0.0, 0.0};
    AttentionLevel level = AttentionLevel::Scanning;
    std::int64_t since = first_t_us;
    std::int64_t last_attention_t = first_t_us;
    std::int64_t collection_start = first_t_us;
    std::size_t attention_frames = 0;

    auto credit = [&](std::int64_t until) {
        const std::int64_t a = std::clamp(since, first_t_us, last_t_us);
        const std::int64_t b = std::clamp(until, first_t_us, last_t_us);
        if (b > a) occupancy[static_cast<int>(level)] += static_cast<double>(b - a);
    };

    for (const auto& f : outbound) {
        const std::string type = f.value("type", "");
        if (type == "attention") {
            ++attention_frames;
            const auto t = f.at("t_us").get<std::int64_t>();
            credit(t);
            level = attention_level_from_string(f.at("level").get<std::string>());
            since = t;
            last_attention_t = t;
        } else if (type == "fixation") {
            ++s.fixations;
        } else if (type == "collection") {
            if (f.value("n_fixations", 0) == 1) collection_start = last_attention_t;
        } else if (type == "pose") {
            InspectedDefect d;
            d.defect = f.at("defect");
            d.pose = {{"position", f.at("position")},
                      {"pan_deg", f.at("pan_deg")},
                      {"tilt_deg", f.at("tilt_deg")},
                      {"standoff_m", f.at("standoff_m")}};
            d.collection_time_s = static_cast<double>(last_attention_t - collection_start) / 1e6;
            s.defects.push_back(std::move(d));
        } else if (type == "error") {
            ++s.errors;
        }
        if (s.session_id.empty() && f.contains("session")) s.session_id = f.at("session").get<std::string>();
    }
    credit(last_t_us);

    if (attention_frames == 0) s.warnings.emplace_back("no attention events in session; summary is empty");
    if (span > 0) {
        s.t_scanning = occupancy[0] / static_cast<double>(span);
        s.t_focusing = occupancy[1] / static_cast<double>(span);
        s.t_inspecting = occupancy[2] / static_cast<double>(span);
    }
    if (attention_frames == 0) s.t_scanning = 0.0;
    return s;
}

SessionSummary summarize(const SessionFile& file) {
    std::optional<std::int64_t> first, last;
    for (const auto& in : file.inbound) {
        const auto* frame = std::get_if<json>(&in);
        if (frame == nullptr || !frame->is_object() || frame->value("type", "") != "gaze") continue;
        const auto t = frame->find("t_us");
        if (t == frame->end() || !t->is_number_integer()) continue;
        if (!first) first = t->get<std::int64_t>();
        last = t->get<std::int64_t>();
    }

    std::vector<json> outbound = file.outbound;
    if (outbound.empty() && !file.inbound.empty()) outbound = replay(file, {}).outbound;

    // the last event closes at the next sample, which may lie past the final gaze frame
    std::int64_t end = last.value_or(0);
    for (const auto& f : outbound)
        if (f.value("type", "") == "attention") end = std::max(end, f.at("t_us").get<std::int64_t>());

    SessionSummary s = summarize_frames(outbound, first.value_or(0), end);
    if (file.header) s.session_id = file.header->value("session_id", s.session_id);
    return s;
}

json to_json(const SessionSummary& s) {
    json defects = json::array();
    for (const auto& d : s.defects)
        defects.push_back({{"defect", d.defect}, {"pose", d.pose}, {"collection_time_s", d.collection_time_s}});
    return {{"session_id", s.session_id},
            {"duration_s", s.duration_s},
            {"t_scanning", s.t_scanning},
            {"t_focusing", s.t_focusing},
            {"t_inspecting", s.t_inspecting},
            {"fixations", s.fixations},
            {"errors", s.errors},
            {"defects", defects},
            {"warnings", s.warnings}};
}

}  // namespace gazeinspect
