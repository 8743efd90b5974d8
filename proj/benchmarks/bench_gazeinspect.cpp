#include <benchmark/benchmark.h>

#include <random>

#include "gazeinspect/pipeline.hpp"
#include "gazeinspect/replay.hpp"
#include "gazeinspect/sim_harness.hpp"

using namespace gazeinspect;

namespace {

// One scan/focus/inspect session over a single defect, about 50 s at 60 Hz.
const sim::GeneratedStream& session() {
    static const sim::GeneratedStream s = [] {
        sim::ScenePlan scene;
        scene.defects.push_back({"d", sim::reference_defect_shapes()[0]});
        return sim::generate_stream(scene, sim::default_script(scene), {}, 60.0, 1);
    }();
    return s;
}

std::vector<Vec2> random_points(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 0.2);
    std::vector<Vec2> out(n);
    for (auto& p : out) p = Vec2(g(rng), g(rng));
    return out;
}

std::vector<FixationEvent> ring_of_fixations(std::size_t n) {
    std::vector<FixationEvent> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double a = 6.283185307179586 * static_cast<double>(i) / static_cast<double>(n);
        out[i].centroid = Vec3(0.3 * std::cos(a), 0.15 * std::sin(a), 2.0);
        out[i].mean_normal = -Vec3::UnitZ();
        out[i].start_us = static_cast<TimestampUs>(i) * 350'000;
        out[i].end_us = out[i].start_us + 300'000;
        out[i].sample_count = 18;
    }
    return out;
}

}  // namespace

static void BM_SegmenterIngest(benchmark::State& state) {
    const auto& samples = session().samples;
    for (auto _ : state) {
        FixationSegmenter seg;
        std::size_t events = 0;
        for (const auto& s : samples) events += seg.ingest(s).has_value();
        benchmark::DoNotOptimize(events);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(samples.size()));
}
BENCHMARK(BM_SegmenterIngest);

static void BM_PipelineProcess(benchmark::State& state) {
    const auto& samples = session().samples;
    for (auto _ : state) {
        InspectionPipeline pipe;
        std::size_t frames = 0;
        for (const auto& s : samples) frames += pipe.process(s).size();
        benchmark::DoNotOptimize(frames);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(samples.size()));
}
BENCHMARK(BM_PipelineProcess);

// Full replay path: JSON decode, session, JSON encode.
static void BM_ReplayMax(benchmark::State& state) {
    SessionFile file;
    for (const auto& s : session().samples) file.inbound.emplace_back(wire::encode_gaze(s));
    for (auto _ : state) {
        const auto r = replay(file, {});
        benchmark::DoNotOptimize(r.outbound.size());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(file.inbound.size()));
}
BENCHMARK(BM_ReplayMax);

static void BM_ConvexHull(benchmark::State& state) {
    const auto pts = random_points(static_cast<std::size_t>(state.range(0)), 3);
    for (auto _ : state) benchmark::DoNotOptimize(convex_hull(pts).area_m2);
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ConvexHull)->RangeMultiplier(4)->Range(16, 4096)->Complexity(benchmark::oNLogN);

static void BM_EstimateDefect(benchmark::State& state) {
    const auto fixations = ring_of_fixations(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(estimate_defect(fixations).area_m2);
}
BENCHMARK(BM_EstimateDefect)->Arg(8)->Arg(32)->Arg(128);

static void BM_CollectionAppend(benchmark::State& state) {
    const auto fixations = ring_of_fixations(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        FixationCollection c;
        for (const auto& f : fixations) benchmark::DoNotOptimize(c.append(f).hull_area_m2);
    }
}
BENCHMARK(BM_CollectionAppend)->Arg(16)->Arg(64);

static void BM_PlanPose(benchmark::State& state) {
    const auto d = estimate_defect(ring_of_fixations(16));
    const CameraConfig camera;
    for (auto _ : state) benchmark::DoNotOptimize(plan_pose(d, camera).standoff_m);
}
BENCHMARK(BM_PlanPose);
BENCHMARK_MAIN();
