#pragma once

// Scripted inspection streams built with the simulator.

#include <string>
#include <vector>

#include "gazeinspect/sim_harness.hpp"
#include "streams.hpp"

namespace fixtures {

namespace sim = gazeinspect::sim;

inline sim::ScenePlan square_scene(double side = 0.3, const gazeinspect::Vec2& at = {0.0, 0.0}) {
    sim::ScenePlan scene;
    const double h = side / 2.0;
    scene.defects.push_back({"square", {{at.x() - h, at.y() - h}, {at.x() + h, at.y() - h},
                                        {at.x() + h, at.y() + h}, {at.x() - h, at.y() + h}}});
    return scene;
}

inline sim::InspectorScript script(const sim::ScenePlan& scene, std::vector<sim::ScriptPhase> phases,
                                   double viewing_distance_m = 2.0) {
    sim::InspectorScript s = sim::default_script(scene, viewing_distance_m);
    s.phases = std::move(phases);
    return s;
}

// Inspect-only dwell on one ~10 cm square defect viewed from arm's length,
// so that 10 s covers window fill plus collection.
inline sim::GeneratedStream inspect_stream(std::uint64_t seed, double seconds = 10.0, double side = 0.12,
                                           double noise_scale = 1.0, double viewing_distance_m = 1.0) {
    const auto scene = square_scene(side);
    const auto s = script(scene, {{sim::Phase::Inspect, std::string("square"), seconds}}, viewing_distance_m);
    sim::NoiseModel noise;
    noise.scale = noise_scale;
    return sim::generate_stream(scene, s, noise, 60.0, seed);
}

// Noise-free scripted inspection: 350 ms dwells hopping round the corners of
// a square on the z = 0 wall, viewed from `distance`. The hull is complete
// after the first lap, so the stop rule fires a few fixations after
// Inspecting is reached.
inline std::vector<gazeinspect::GazeSample> corner_walk(std::size_t n_samples, double side = 0.10,
                                                        double distance = 1.0, std::int64_t t0_us = 1'000'000) {
    const double h = side / 2.0;
    const gazeinspect::Vec3 corners[4] = {{-h, -h, 0.0}, {h, -h, 0.0}, {h, h, 0.0}, {-h, h, 0.0}};
    std::vector<gazeinspect::GazeSample> out;
    for (std::size_t k = 0; out.size() < n_samples; ++k) {
        for (const auto& s : streams::dwell(t0_us + static_cast<std::int64_t>(out.size()) * 16'667, corners[k % 4], 21,
                                            distance)) {
            if (out.size() == n_samples) break;
            out.push_back(s);
        }
    }
    return out;
}

// Scan, focus, inspect, scan: the shape of a typical session.
inline sim::GeneratedStream session_stream(std::uint64_t seed) {
    const auto scene = square_scene();
    const auto s = script(scene, {{sim::Phase::Scan, std::nullopt, 8.0},
                                  {sim::Phase::Focus, std::string("square"), 8.0},
                                  {sim::Phase::Inspect, std::string("square"), 20.0},
                                  {sim::Phase::Scan, std::nullopt, 8.0}});
    return sim::generate_stream(scene, s, {}, 60.0, seed);
}

}  // namespace fixtures
