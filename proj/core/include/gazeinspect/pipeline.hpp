#pragma once

#include <optional>
#include <vector>

#include "gazeinspect/config.hpp"
#include "gazeinspect/wire.hpp"

namespace gazeinspect {

/// gaze_core -> attention -> defect_eval -> pose_planner for one stream.
///
/// Collection starts when attention enters Inspecting, survives a dip to
/// Focusing and is discarded on Scanning. Once a pose has been produced the
/// pipeline waits for Scanning before it will collect again, so one scrutiny
/// episode yields one pose.
class InspectionPipeline {
public:
    explicit InspectionPipeline(PipelineConfig config = {});

    /// Throws SampleRejected; the pipeline is unaffected by a rejected sample.
    std::vector<wire::Outbound> process(const GazeSample& sample);

    /// Closes the pending candidate set at end of stream.
    std::vector<wire::Outbound> flush();

    const PipelineConfig& config() const { return config_; }
    AttentionLevel level() const { return tracker_.level(); }
    bool collecting() const { return collection_.has_value(); }

private:
    void handle(const GazeEvent& event, std::vector<wire::Outbound>& out);

    PipelineConfig config_;
    FixationSegmenter segmenter_;
    AttentionTracker tracker_;
    std::optional<FixationCollection> collection_;
    bool armed_{true};
};

}  // namespace gazeinspect
