#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gazeinspect/replay.hpp"

namespace gazeinspect {

struct InspectedDefect {
    nlohmann::json defect;  // as sent in the pose frame
    nlohmann::json pose;    // position, pan/tilt, standoff
    double collection_time_s{0.0};
};

/// Occupancy ratios of the three attention levels and every defect the
/// session produced a pose for.
struct SessionSummary {
    std::string session_id;
    double duration_s{0.0};
    double t_scanning{0.0};
    double t_focusing{0.0};
    double t_inspecting{0.0};
    std::size_t fixations{0};
    std::size_t errors{0};
    std::vector<InspectedDefect> defects;
    std::vector<std::string> warnings;
};

/// Works on the recorded outbound frames; a raw sample log is replayed first.
SessionSummary summarize(const SessionFile& file);
SessionSummary summarize_frames(const std::vector<nlohmann::json>& outbound, std::int64_t first_t_us,
                                std::int64_t last_t_us);

nlohmann::json to_json(const SessionSummary& s);

}  // namespace gazeinspect
