#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "gazeinspect/gaze_core.hpp"
#include "oracles.hpp"
#include "streams.hpp"

using namespace gazeinspect;

namespace {

std::vector<GazeEvent> segment(const std::vector<GazeSample>& samples, DispersionConfig cfg = {}) {
    FixationSegmenter seg(cfg);
    std::vector<GazeEvent> out;
    for (const auto& s : samples)
        if (auto e = seg.ingest(s)) out.push_back(*e);
    if (auto e = seg.flush()) out.push_back(*e);
    return out;
}

const Vec3 kEye(0.0, 0.0, 0.0);

GazeSample at(std::int64_t t_us, const Vec3& hit) { return {t_us, kEye, hit, -Vec3::UnitZ()}; }

}  // namespace

TEST(DispersionDiameter, WorkedValues) {
    EXPECT_EQ(dispersion_diameter(0.0, 2.86), 0.0);
    EXPECT_NEAR(dispersion_diameter(1.0, 2.86), 0.04993, 5e-6);
    // listed as 5.5 x the rounded 1 m value, so it carries 5.5x that rounding
    EXPECT_NEAR(dispersion_diameter(5.5, 2.86), 0.27462, 5.5 * 5e-6 + 5e-6);
    EXPECT_NEAR(dispersion_diameter(5.5, 2.86), 5.5 * dispersion_diameter(1.0, 2.86), 1e-15);
}

TEST(DispersionDiameter, MatchesChordFormulaAndIsMonotone) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> d(0.0, 10.0), a(0.01, 179.0);
    for (int i = 0; i < 1000; ++i) {
        const double dist = d(rng), ang = a(rng);
        EXPECT_NEAR(dispersion_diameter(dist, ang), oracle::dispersion_diameter(dist, ang), 1e-12 * (1.0 + dist));
        EXPECT_LE(dispersion_diameter(dist, ang), dispersion_diameter(dist + 0.1, ang));
        EXPECT_LE(dispersion_diameter(dist, ang), dispersion_diameter(dist, std::min(179.5, ang + 0.5)));
    }
}

TEST(DispersionDiameter, RejectsBadArguments) {
    EXPECT_THROW(dispersion_diameter(1.0, 0.0), std::domain_error);
    EXPECT_THROW(dispersion_diameter(1.0, 180.0), std::domain_error);
    EXPECT_THROW(dispersion_diameter(1.0, -3.0), std::domain_error);
    EXPECT_THROW(dispersion_diameter(-1.0, 2.86), std::domain_error);
}

TEST(DispersionConfig, Validates) {
    EXPECT_THROW(FixationSegmenter(DispersionConfig{0.0, 8, 60.0}), std::domain_error);
    EXPECT_THROW(FixationSegmenter(DispersionConfig{2.86, 1, 60.0}), std::domain_error);
    EXPECT_THROW(FixationSegmenter(DispersionConfig{2.86, 8, 0.0}), std::domain_error);
}

TEST(Segmenter, EightSamplesMakeAFixationOnTheNinthCall) {
    FixationSegmenter seg;
    const Vec3 p(0.1, 0.2, 2.0);
    for (int i = 0; i < 8; ++i) {
        EXPECT_FALSE(seg.ingest(at(i * 16'667, p)).has_value()) << "call " << i + 1;
    }
    const auto e = seg.ingest(at(8 * 16'667, Vec3(1.5, 0.2, 2.0)));
    ASSERT_TRUE(e.has_value());
    const auto* f = std::get_if<FixationEvent>(&*e);
    ASSERT_NE(f, nullptr);
    EXPECT_EQ(f->sample_count, 8u);
    EXPECT_NEAR(f->duration_ms(), 133.3, 0.5);
    EXPECT_TRUE(f->centroid.isApprox(p));
}

TEST(Segmenter, SevenSamplesMakeASaccade) {
    FixationSegmenter seg;
    for (int i = 0; i < 7; ++i) {
        EXPECT_FALSE(seg.ingest(at(i * 16'667, Vec3(0, 0, 2))).has_value());
    }
    const auto e = seg.ingest(at(7 * 16'667, Vec3(1, 0, 2)));
    ASSERT_TRUE(e.has_value());
    const auto* s = std::get_if<SaccadeEvent>(&*e);
    ASSERT_NE(s, nullptr);
    EXPECT_EQ(s->sample_count, 7u);
}

TEST(Segmenter, FirstSampleEmitsNothing) {
    FixationSegmenter seg;
    EXPECT_FALSE(seg.ingest(at(0, Vec3(0, 0, 2))).has_value());
    EXPECT_EQ(seg.pending_samples(), 1u);
}

TEST(Segmenter, FlushClosesPendingSet) {
    {
        FixationSegmenter seg;
        for (int i = 0; i < 10; ++i) seg.ingest(at(i * 16'667, Vec3(0, 0, 2)));
        const auto e = seg.flush();
        ASSERT_TRUE(e.has_value());
        EXPECT_TRUE(std::holds_alternative<FixationEvent>(*e));
        EXPECT_EQ(event_sample_count(*e), 10u);
        EXPECT_EQ(seg.pending_samples(), 0u);
        EXPECT_FALSE(seg.flush().has_value());
    }
    {
        FixationSegmenter seg;
        for (int i = 0; i < 3; ++i) seg.ingest(at(i * 16'667, Vec3(0, 0, 2)));
        const auto e = seg.flush();
        ASSERT_TRUE(e.has_value());
        EXPECT_TRUE(std::holds_alternative<SaccadeEvent>(*e));
        EXPECT_EQ(event_sample_count(*e), 3u);
    }
    FixationSegmenter empty;
    EXPECT_FALSE(empty.flush().has_value());
}

TEST(Segmenter, FlushResetsTimestampOrdering) {
    FixationSegmenter seg;
    seg.ingest(at(1000, Vec3(0, 0, 2)));
    seg.flush();
    EXPECT_NO_THROW(seg.ingest(at(10, Vec3(0, 0, 2))));
}

TEST(Segmenter, RejectedSamplesLeaveStateUntouched) {
    const auto clean = streams::planted_fixations(5, 11);
    auto dirty = clean.samples;
    // a duplicate timestamp, a non-unit normal and a zero-length ray
    GazeSample dup = dirty[10];
    GazeSample bad_normal = dirty[20];
    bad_normal.t_us += 1;
    bad_normal.normal *= 2.0;
    GazeSample zero = dirty[30];
    zero.t_us += 1;
    zero.hit = zero.origin;

    FixationSegmenter seg;
    std::vector<GazeEvent> got;
    std::size_t rejected = 0;
    for (std::size_t i = 0; i < dirty.size(); ++i) {
        if (auto e = seg.ingest(dirty[i])) got.push_back(*e);
        for (const GazeSample* extra : {i == 10 ? &dup : nullptr, i == 20 ? &bad_normal : nullptr,
                                        i == 30 ? &zero : nullptr}) {
            if (extra == nullptr) continue;
            EXPECT_THROW(seg.ingest(*extra), SampleRejected);
            ++rejected;
        }
    }
    if (auto e = seg.flush()) got.push_back(*e);
    EXPECT_EQ(rejected, 3u);

    const auto expected = segment(clean.samples);
    ASSERT_EQ(got.size(), expected.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
        EXPECT_EQ(event_start(got[i]), event_start(expected[i]));
        EXPECT_EQ(event_sample_count(got[i]), event_sample_count(expected[i]));
    }
}

TEST(Segmenter, PlantedFixationsArePartitionedExactly) {
    for (std::size_t k = 1; k <= 20; ++k) {
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            const auto planted = streams::planted_fixations(k, 1000 * k + seed);
            const auto events = segment(planted.samples);
            ASSERT_EQ(events.size(), planted.expected_counts.size()) << "k=" << k << " seed=" << seed;
            std::size_t fixations = 0, total = 0;
            for (std::size_t i = 0; i < events.size(); ++i) {
                EXPECT_EQ(event_sample_count(events[i]), planted.expected_counts[i]);
                EXPECT_EQ(std::holds_alternative<FixationEvent>(events[i]), planted.expected_is_fixation[i]);
                fixations += std::holds_alternative<FixationEvent>(events[i]);
                total += event_sample_count(events[i]);
            }
            EXPECT_EQ(fixations, k);
            EXPECT_EQ(total, planted.samples.size());
        }
    }
}

TEST(Segmenter, ThresholdFlipsMembershipAtOnePercent) {
    const double distance = 2.0;
    const double radius = oracle::dispersion_diameter(distance, 2.86) / 2.0;
    const Vec3 centre(0.0, 0.0, distance);
    for (double factor : {0.99, 1.01}) {
        FixationSegmenter seg;
        for (int i = 0; i < 8; ++i) {
            ASSERT_FALSE(seg.ingest(at(i * 16'667, centre)).has_value());
        }
        const auto e = seg.ingest(at(8 * 16'667, centre + Vec3(factor * radius, 0.0, 0.0)));
        if (factor < 1.0) {
            EXPECT_FALSE(e.has_value());
            EXPECT_EQ(seg.pending_samples(), 9u);
        } else {
            ASSERT_TRUE(e.has_value());
            EXPECT_EQ(event_sample_count(*e), 8u);
            EXPECT_EQ(seg.pending_samples(), 1u);
        }
    }
}

TEST(Segmenter, FixationMembersStayNearTheCentroid) {
    // Dwells whose samples scatter anywhere inside the dispersion sphere of a
    // fixed target, up to its full radius. Unbounded drift is excluded: a
    // running centroid can be walked away from its first members.
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_int_distribution<int> dwell(5, 40);
    for (int run = 0; run < 20; ++run) {
        std::vector<GazeSample> samples;
        const double distance = 1.0 + run * 0.25;
        const double r = oracle::dispersion_diameter(distance, 2.86) / 2.0;
        Vec3 target(0.0, 0.0, distance);
        std::int64_t t = 0;
        for (int k = 0; k < 100; ++k) {
            target += Vec3(10.0 * r, u(rng) * r, 0.0);
            for (int i = dwell(rng); i > 0; --i) {
                Vec3 j;
                do {
                    j = Vec3(u(rng), u(rng), 0.0);
                } while (j.norm() > 1.0);
                samples.push_back({t, Vec3(target.x(), target.y(), 0.0), target + j * r, -Vec3::UnitZ()});
                t += 16'667;
            }
        }
        const auto events = segment(samples);
        std::size_t cursor = 0;
        for (const auto& e : events) {
            const std::size_t count = event_sample_count(e);
            if (const auto* f = std::get_if<FixationEvent>(&e)) {
                double dist = 0.0;
                for (std::size_t i = cursor; i < cursor + count; ++i) dist += samples[i].gaze_distance();
                const double radius = oracle::dispersion_diameter(dist / count, 2.86) / 2.0;
                for (std::size_t i = cursor; i < cursor + count; ++i) {
                    EXPECT_LE((samples[i].hit - f->centroid).norm(), 1.25 * radius);
                }
            }
            cursor += count;
        }
        EXPECT_EQ(cursor, samples.size());
    }
}

TEST(Segmenter, EventsTileTimeInOrder) {
    const auto planted = streams::planted_fixations(12, 99);
    const auto events = segment(planted.samples);
    ASSERT_FALSE(events.empty());
    EXPECT_EQ(event_start(events.front()), planted.samples.front().t_us);
    for (std::size_t i = 0; i < events.size(); ++i) {
        EXPECT_LE(event_start(events[i]), event_end(events[i]));
        if (const auto* f = std::get_if<FixationEvent>(&events[i])) {
            EXPECT_GT(f->end_us, f->start_us);
            EXPECT_GE(f->sample_count, 8u);
        }
        if (i > 0) {
            EXPECT_EQ(event_end(events[i - 1]), event_start(events[i]));
        }
    }
}

TEST(Segmenter, Deterministic) {
    const auto planted = streams::planted_fixations(15, 5);
    const auto a = segment(planted.samples);
    const auto b = segment(planted.samples);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        ASSERT_EQ(a[i].index(), b[i].index());
        EXPECT_EQ(event_start(a[i]), event_start(b[i]));
        EXPECT_EQ(event_end(a[i]), event_end(b[i]));
        if (const auto* f = std::get_if<FixationEvent>(&a[i])) {
            const auto& g = std::get<FixationEvent>(b[i]);
            EXPECT_EQ(f->centroid, g.centroid);
            EXPECT_EQ(f->mean_normal, g.mean_normal);
        }
    }
}

TEST(Segmenter, MeanNormalIsUnitAndFallsBackOnCancellation) {
    const auto planted = streams::planted_fixations(10, 17);
    for (const auto& e : segment(planted.samples)) {
        if (const auto* f = std::get_if<FixationEvent>(&e)) {
            EXPECT_NEAR(f->mean_normal.norm(), 1.0, 1e-6);
        }
    }

    FixationSegmenter seg;
    for (int i = 0; i < 8; ++i) {
        GazeSample s = at(i * 16'667, Vec3(0, 0, 2));
        s.normal = (i % 2 == 0) ? Vec3::UnitX() : Vec3(-Vec3::UnitX());
        seg.ingest(s);
    }
    const auto e = seg.flush();
    ASSERT_TRUE(e.has_value());
    const auto& f = std::get<FixationEvent>(*e);
    EXPECT_EQ(f.mean_normal, Vec3(-Vec3::UnitX()));  // last member
}
