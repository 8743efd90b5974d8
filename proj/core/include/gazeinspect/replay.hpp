#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "gazeinspect/config.hpp"

namespace gazeinspect {

/// Unreadable or corrupt session file; the message starts with "line N:".
class ReplayError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Contents of a recorded session log or of a raw gaze-sample log (one
/// inbound frame per line, no header).
struct SessionFile {
    std::optional<nlohmann::json> header;
    std::vector<std::variant<nlohmann::json, std::string>> inbound;  // parsed frame or raw line
    std::vector<nlohmann::json> outbound;
};

SessionFile read_session_file(const std::filesystem::path& path);

struct ReplayOptions {
    std::optional<double> speed;  // real-time multiplier; empty means as fast as possible
    std::optional<PipelineConfig> config;  // overrides the recorded config
};

struct ReplayResult {
    std::vector<nlohmann::json> outbound;
    std::size_t inbound_count{0};
    bool has_recording{false};  // the file carried outbound frames to compare against
    std::optional<std::size_t> first_mismatch;  // index into outbound, when the replay diverged
    double stream_span_s{0.0};  // last minus first gaze timestamp
    double wall_time_s{0.0};
};

/// Re-feeds the inbound frames through a fresh pipeline. With a speed the
/// gaze frames are paced by their t_us; each outbound frame is handed to
/// `sink` as soon as it is produced.
ReplayResult replay(const SessionFile& file, const ReplayOptions& options,
                    const std::function<void(const nlohmann::json&)>& sink = {});

ReplayResult replay_file(const std::filesystem::path& path, const ReplayOptions& options,
                         const std::function<void(const nlohmann::json&)>& sink = {});

}  // namespace gazeinspect
