#include "gazeinspect/attention.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace gazeinspect {

std::string_view to_string(AttentionLevel level) {
    switch (level) {
        case AttentionLevel::Scanning: return "scanning";
        case AttentionLevel::Focusing: return "focusing";
        case AttentionLevel::Inspecting: return "inspecting";
    }
    return "scanning";
}

AttentionLevel attention_level_from_string(std::string_view s) {
    if (s == "scanning") return AttentionLevel::Scanning;
    if (s == "focusing") return AttentionLevel::Focusing;
    if (s == "inspecting") return AttentionLevel::Inspecting;
    throw std::invalid_argument("unknown attention level: " + std::string(s));
}

void AttentionThresholds::validate() const {
    if (inspecting_fr < focusing_fr)
        throw std::domain_error("inspecting FR threshold must not be below the focusing one");
    if (inspecting_msl_m > focusing_msl_m)
        throw std::domain_error("inspecting MSL threshold must not exceed the focusing one");
}

void AttentionConfig::validate() const {
    if (!(window_s > 0.0)) throw std::domain_error("attention window must be positive");
    if (min_dwell_ms < 0.0) throw std::domain_error("min dwell must be non-negative");
    thresholds.validate();
}

AttentionMetrics compute_metrics(std::span<const GazeEvent> events, TimestampUs now_us,
                                 double window_s) {
    if (window_s < 0.0) throw std::domain_error("negative attention window");

    AttentionMetrics m;
    m.window_s = window_s;
    const auto window_us = static_cast<TimestampUs>(window_s * 1e6);
    const TimestampUs lo = now_us - window_us;

    TimestampUs covered_us = 0;
    double duration_sum_ms = 0.0;
    std::size_t fixations = 0;
    double step_sum = 0.0;
    const FixationEvent* prev = nullptr;

    for (const auto& e : events) {
        const auto* f = std::get_if<FixationEvent>(&e);
        if (f == nullptr) continue;
        if (f->end_us <= lo || f->start_us >= now_us) continue;

        covered_us += std::min(f->end_us, now_us) - std::max(f->start_us, lo);
        duration_sum_ms += f->duration_ms();
        if (prev != nullptr) step_sum += (f->centroid - prev->centroid).norm();
        prev = f;
        ++fixations;
    }

    if (window_us > 0) m.fr = std::min(1.0, static_cast<double>(covered_us) / static_cast<double>(window_us));
    if (fixations > 0) m.mfd_ms = duration_sum_ms / static_cast<double>(fixations);
    if (fixations > 1) m.msl_m = step_sum / static_cast<double>(fixations - 1);
    return m;
}

AttentionLevel classify(const AttentionMetrics& m, const AttentionThresholds& t) {
    if (m.fr >= t.inspecting_fr && m.msl_m <= t.inspecting_msl_m && m.mfd_ms >= t.inspecting_mfd_ms)
        return AttentionLevel::Inspecting;
    if (m.fr >= t.focusing_fr && m.msl_m <= t.focusing_msl_m)
        return AttentionLevel::Focusing;
    return AttentionLevel::Scanning;
}

AttentionTracker::AttentionTracker(AttentionConfig config) : config_(config) {
    config_.validate();
    metrics_.window_s = config_.window_s;
}

std::optional<AttentionTransition> AttentionTracker::step(const GazeEvent& event) {
    const TimestampUs now = event_end(event);
    history_.push_back(event);

    const auto window_us = static_cast<TimestampUs>(config_.window_s * 1e6);
    while (!history_.empty() && event_end(history_.front()) <= now - window_us)
        history_.pop_front();

    // deque is not contiguous; copy the (short) window into a vector
    const std::vector<GazeEvent> window(history_.begin(), history_.end());
    metrics_ = compute_metrics(window, now, config_.window_s);
    const AttentionLevel candidate = classify(metrics_, config_.thresholds);

    if (candidate == level_) {
        pending_.reset();
        return std::nullopt;
    }
    if (!pending_ || *pending_ != candidate) {
        pending_ = candidate;
        pending_since_ = now;
    }
    if (static_cast<double>(now - pending_since_) / 1000.0 < config_.min_dwell_ms)
        return std::nullopt;

    AttentionTransition tr{level_, candidate, now};
    level_ = candidate;
    pending_.reset();
    return tr;
}

}  // namespace gazeinspect
