#include "gazeinspect/gaze_core.hpp"

#include <cmath>
#include <string>

namespace gazeinspect {

void DispersionConfig::validate() const {
    if (!(dispersion_angle_deg > 0.0 && dispersion_angle_deg < 180.0))
        throw std::domain_error("dispersion angle must be in (0, 180) degrees");
    if (min_fixation_samples < 2)
        throw std::domain_error("min_fixation_samples must be at least 2");
    if (!(sample_rate_hz > 0.0))
        throw std::domain_error("sample rate must be positive");
}

double dispersion_diameter(double distance_m, double angle_deg) {
    if (!(angle_deg > 0.0 && angle_deg < 180.0))
        throw std::domain_error("dispersion angle must be in (0, 180) degrees");
    if (distance_m < 0.0)
        throw std::domain_error("distance must be non-negative");
    return 2.0 * distance_m * std::tan(deg_to_rad(angle_deg) / 2.0);
}

FixationSegmenter::FixationSegmenter(DispersionConfig config) : config_(config) {
    config_.validate();
}

std::optional<GazeEvent> FixationSegmenter::ingest(const GazeSample& s) {
    if (last_t_ && s.t_us <= *last_t_)
        throw SampleRejected("non-monotonic timestamp " + std::to_string(s.t_us) +
                             " after " + std::to_string(*last_t_));
    if (!is_unit(s.normal))
        throw SampleRejected("surface normal is not unit length");
    if (!(s.gaze_distance() > 0.0))
        throw SampleRejected("gaze hit coincides with gaze origin");
    if (!s.hit.allFinite() || !s.origin.allFinite())
        throw SampleRejected("non-finite coordinates");

    last_t_ = s.t_us;
    if (count_ == 0) {
        start_candidates(s);
        return std::nullopt;
    }

    const double n = static_cast<double>(count_);
    const Vec3 centre = hit_sum_ / n;
    const double radius = dispersion_diameter(distance_sum_ / n, config_.dispersion_angle_deg) / 2.0;
    if ((s.hit - centre).norm() <= radius) {
        add_candidate(s);
        return std::nullopt;
    }

    GazeEvent closed = finalize(s.t_us);
    start_candidates(s);
    return closed;
}

std::optional<GazeEvent> FixationSegmenter::flush() {
    if (count_ == 0) return std::nullopt;
    const auto period_us = static_cast<TimestampUs>(std::llround(1e6 / config_.sample_rate_hz));
    GazeEvent closed = finalize(*last_t_ + period_us);
    count_ = 0;
    last_t_.reset();
    return closed;
}

GazeEvent FixationSegmenter::finalize(TimestampUs end_us) const {
    if (count_ < config_.min_fixation_samples)
        return SaccadeEvent{first_t_, end_us, count_};

    FixationEvent f;
    f.centroid = hit_sum_ / static_cast<double>(count_);
    const double len = normal_sum_.norm();
    // Antipodal normals can cancel; fall back to the newest member.
    f.mean_normal = len > 1e-12 ? Vec3(normal_sum_ / len) : last_normal_;
    f.start_us = first_t_;
    f.end_us = end_us;
    f.sample_count = count_;
    return f;
}

void FixationSegmenter::start_candidates(const GazeSample& s) {
    count_ = 0;
    hit_sum_.setZero();
    normal_sum_.setZero();
    distance_sum_ = 0.0;
    first_t_ = s.t_us;
    add_candidate(s);
}

void FixationSegmenter::add_candidate(const GazeSample& s) {
    ++count_;
    hit_sum_ += s.hit;
    normal_sum_ += s.normal;
    last_normal_ = s.normal;
    distance_sum_ += s.gaze_distance();
}

}  // namespace gazeinspect
