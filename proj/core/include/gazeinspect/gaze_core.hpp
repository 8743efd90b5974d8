#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <variant>
#include <vector>

#include "gazeinspect/geometry.hpp"

namespace gazeinspect {

/// One eye-tracker sample: gaze ray origin, its hit on the scene surface and
/// the surface normal at the hit.
struct GazeSample {
    TimestampUs t_us{0};
    Vec3 origin{Vec3::Zero()};
    Vec3 hit{Vec3::Zero()};
    Vec3 normal{Vec3::UnitZ()};

    double gaze_distance() const { return (hit - origin).norm(); }
};

struct DispersionConfig {
    double dispersion_angle_deg{2.86};
    std::size_t min_fixation_samples{8};
    double sample_rate_hz{60.0};  // nominal; only used to close the final event on flush

    void validate() const;
};

struct FixationEvent {
    Vec3 centroid{Vec3::Zero()};
    Vec3 mean_normal{Vec3::UnitZ()};
    TimestampUs start_us{0};
    TimestampUs end_us{0};
    std::size_t sample_count{0};

    double duration_ms() const { return static_cast<double>(end_us - start_us) / 1000.0; }
};

struct SaccadeEvent {
    TimestampUs start_us{0};
    TimestampUs end_us{0};
    std::size_t sample_count{0};
};

using GazeEvent = std::variant<FixationEvent, SaccadeEvent>;

inline TimestampUs event_start(const GazeEvent& e) {
    return std::visit([](const auto& x) { return x.start_us; }, e);
}
inline TimestampUs event_end(const GazeEvent& e) {
    return std::visit([](const auto& x) { return x.end_us; }, e);
}
inline std::size_t event_sample_count(const GazeEvent& e) {
    return std::visit([](const auto& x) { return x.sample_count; }, e);
}

/// Thrown for a sample that cannot be accepted. The segmenter state is left
/// untouched, so the caller may keep streaming.
class SampleRejected : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Linear diameter subtended by `angle_deg` at `distance_m`.
double dispersion_diameter(double distance_m, double angle_deg);

/// Streaming 3D dispersion segmenter.
///
/// Samples accumulate in a candidate set while each new hit stays inside a
/// sphere centred on the running centroid of the candidates, whose diameter is
/// the dispersion angle converted at the candidates' mean gaze distance. The
/// first sample outside the sphere closes the set: it becomes a fixation when
/// it holds at least `min_fixation_samples` samples and a saccade otherwise.
///
/// Event intervals are half-open: an event ends at the timestamp of the sample
/// that closed it, so consecutive events tile the stream without overlap.
class FixationSegmenter {
public:
    explicit FixationSegmenter(DispersionConfig config = {});

    /// Returns the event closed by this sample, if any.
    std::optional<GazeEvent> ingest(const GazeSample& sample);

    /// Closes the pending candidate set and resets the segmenter.
    std::optional<GazeEvent> flush();

    const DispersionConfig& config() const { return config_; }
    std::size_t pending_samples() const { return count_; }
    std::optional<TimestampUs> last_timestamp() const { return last_t_; }

private:
    GazeEvent finalize(TimestampUs end_us) const;
    void start_candidates(const GazeSample& s);
    void add_candidate(const GazeSample& s);

    DispersionConfig config_;
    std::size_t count_{0};
    Vec3 hit_sum_{Vec3::Zero()};
    Vec3 normal_sum_{Vec3::Zero()};
    Vec3 last_normal_{Vec3::UnitZ()};
    double distance_sum_{0.0};
    TimestampUs first_t_{0};
    std::optional<TimestampUs> last_t_;
};

}  // namespace gazeinspect
