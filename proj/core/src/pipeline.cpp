#include "gazeinspect/pipeline.hpp"

namespace gazeinspect {

InspectionPipeline::InspectionPipeline(PipelineConfig config)
    : config_(config), segmenter_(config.dispersion), tracker_(config.attention) {
    config_.validate();
}

std::vector<wire::Outbound> InspectionPipeline::process(const GazeSample& sample) {
    std::vector<wire::Outbound> out;
    if (auto event = segmenter_.ingest(sample)) handle(*event, out);
    return out;
}

std::vector<wire::Outbound> InspectionPipeline::flush() {
    std::vector<wire::Outbound> out;
    if (auto event = segmenter_.flush()) handle(*event, out);
    return out;
}

void InspectionPipeline::handle(const GazeEvent& event, std::vector<wire::Outbound>& out) {
    const auto* fixation = std::get_if<FixationEvent>(&event);
    if (fixation != nullptr) out.emplace_back(wire::FixationMsg{fixation->centroid, fixation->duration_ms()});

    const auto transition = tracker_.step(event);
    out.emplace_back(wire::AttentionMsg{tracker_.level(), tracker_.metrics(), event_end(event)});

    if (transition) {
        if (transition->to == AttentionLevel::Scanning) {
            collection_.reset();
            armed_ = true;
        } else if (transition->to == AttentionLevel::Inspecting && armed_ && !collection_) {
            collection_.emplace();
        }
    }

    if (!collection_ || fixation == nullptr) return;

    const CollectionProgress progress = collection_->append(*fixation);
    out.emplace_back(wire::CollectionMsg{progress});
    if (!progress.stopped) return;

    try {
        const DefectEstimate defect = collection_->estimate(config_.defect);
        out.emplace_back(wire::PoseMsg{defect, plan_pose(defect, config_.camera)});
    } catch (const std::exception& e) {
        out.emplace_back(wire::ErrorMsg{std::string(wire::code::kEstimateFailed), e.what()});
    }
    collection_.reset();
    armed_ = false;
}

}  // namespace gazeinspect
