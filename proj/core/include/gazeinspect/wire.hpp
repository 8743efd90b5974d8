#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>

#include <nlohmann/json.hpp>

#include "gazeinspect/attention.hpp"
#include "gazeinspect/defect_eval.hpp"
#include "gazeinspect/pose_planner.hpp"

namespace gazeinspect::wire {

inline constexpr int kProtocolVersion = 1;

// Outbound payloads. Sequence numbers and the session id are stamped by the
// session when the frame is serialized.
struct FixationMsg {
    Vec3 centroid;
    double duration_ms;
};

struct AttentionMsg {
    AttentionLevel level;
    AttentionMetrics metrics;
    TimestampUs t_us;
};

struct CollectionMsg {
    CollectionProgress progress;
};

struct PoseMsg {
    DefectEstimate defect;
    DronePose pose;
};

struct ErrorMsg {
    std::string code;
    std::string detail;
};

using Outbound = std::variant<FixationMsg, AttentionMsg, CollectionMsg, PoseMsg, ErrorMsg>;

/// Error codes used in error frames.
namespace code {
inline constexpr std::string_view kBadMessage = "bad_message";
inline constexpr std::string_view kRejectedSample = "rejected_sample";
inline constexpr std::string_view kProtocolVersion = "protocol_version";
inline constexpr std::string_view kEstimateFailed = "estimate_failed";
}  // namespace code

nlohmann::json encode(const Outbound& msg, std::uint64_t seq, std::string_view session_id);

struct HelloMsg {
    int version;
};

/// Inbound frames: `{"type":"gaze",...}` or an optional `{"type":"hello","version":n}`.
using Inbound = std::variant<GazeSample, HelloMsg>;

/// Throws BadMessage with a human-readable reason.
Inbound decode_inbound(const nlohmann::json& frame);

class BadMessage : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

nlohmann::json encode_gaze(const GazeSample& s);

/// Outbound frame minus the fields that legitimately differ between a live
/// session and its replay (session id).
nlohmann::json comparable(nlohmann::json frame);

}  // namespace gazeinspect::wire
