#pragma once

#include <deque>
#include <limits>
#include <optional>
#include <span>
#include <string_view>

#include "gazeinspect/gaze_core.hpp"

namespace gazeinspect {

enum class AttentionLevel { Scanning, Focusing, Inspecting };

std::string_view to_string(AttentionLevel level);
AttentionLevel attention_level_from_string(std::string_view s);

struct AttentionMetrics {
    double fr{0.0};      // fraction of the window spent in fixations
    double mfd_ms{0.0};  // mean full duration of fixations touching the window
    double msl_m{std::numeric_limits<double>::infinity()};  // +inf with fewer than two fixations
    double window_s{5.0};
};

struct AttentionThresholds {
    double focusing_fr{0.50};
    double focusing_msl_m{0.5};
    double inspecting_fr{0.90};
    double inspecting_msl_m{0.15};
    double inspecting_mfd_ms{300.0};

    void validate() const;
};

struct AttentionConfig {
    double window_s{5.0};
    AttentionThresholds thresholds{};
    double min_dwell_ms{0.0};  // a new level must persist this long before it is reported

    void validate() const;
};

/// FR, MFD and MSL over [now - window, now]. Events must be ordered by start.
AttentionMetrics compute_metrics(std::span<const GazeEvent> events, TimestampUs now_us,
                                 double window_s);

AttentionLevel classify(const AttentionMetrics& m, const AttentionThresholds& t);

struct AttentionTransition {
    AttentionLevel from{AttentionLevel::Scanning};
    AttentionLevel to{AttentionLevel::Scanning};
    TimestampUs t_us{0};
};

/// Keeps the trailing event history of one stream and re-evaluates the
/// attention level each time a gaze event completes.
class AttentionTracker {
public:
    explicit AttentionTracker(AttentionConfig config = {});

    std::optional<AttentionTransition> step(const GazeEvent& event);

    AttentionLevel level() const { return level_; }
    const AttentionMetrics& metrics() const { return metrics_; }
    const AttentionConfig& config() const { return config_; }

private:
    AttentionConfig config_;
    std::deque<GazeEvent> history_;
    AttentionMetrics metrics_{};
    AttentionLevel level_{AttentionLevel::Scanning};
    std::optional<AttentionLevel> pending_;
    TimestampUs pending_since_{0};
};

}  // namespace gazeinspect
