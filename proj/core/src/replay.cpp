#include "gazeinspect/replay.hpp"

#include <chrono>
#include <fstream>
#include <thread>

#include "gazeinspect/session.hpp"

namespace gazeinspect {

using nlohmann::json;

SessionFile read_session_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ReplayError("line 0: cannot open " + path.string());

    SessionFile file;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;

        const json j = json::parse(line, nullptr, false);
        auto fail = [&](const std::string& why) {
            return ReplayError("line " + std::to_string(lineno) + ": " + why);
        };
        if (j.is_discarded() || !j.is_object()) throw fail("not a JSON object");

        if (j.value("type", "") == "session") {
            if (file.header || !file.inbound.empty() || !file.outbound.empty())
                throw fail("session header must be the first line");
            file.header = j;
            continue;
        }
        const auto dir = j.find("dir");
        if (dir == j.end()) {
            // raw sample log
            file.inbound.emplace_back(j);
            continue;
        }
        if (*dir == "in") {
            if (j.contains("frame")) file.inbound.emplace_back(j.at("frame"));
            else if (j.contains("raw") && j.at("raw").is_string()) file.inbound.emplace_back(j.at("raw").get<std::string>());
            else throw fail("inbound record without frame or raw");
        } else if (*dir == "out") {
            if (!j.contains("frame")) throw fail("outbound record without frame");
            file.outbound.push_back(j.at("frame"));
        } else {
            throw fail("unknown record direction");
        }
    }
    return file;
}

ReplayResult replay(const SessionFile& file, const ReplayOptions& options,
                    const std::function<void(const json&)>& sink) {
    PipelineConfig config;
    if (options.config) config = *options.config;
    else if (file.header && file.header->contains("config"))
        config = pipeline_config_from_json(file.header->at("config"));

    Session session(file.header ? file.header->value("session_id", "replay") : "replay", config);
    ReplayResult result;
    result.has_recording = !file.outbound.empty();

    auto deliver = [&](std::vector<json> frames) {
        for (auto& f : frames) {
            if (sink) sink(f);
            result.outbound.push_back(std::move(f));
        }
    };

    using clock = std::chrono::steady_clock;
    const auto wall_start = clock::now();
    std::optional<std::int64_t> first_t, last_t;

    for (const auto& in : file.inbound) {
        if (const auto* raw = std::get_if<std::string>(&in)) {
            deliver(session.handle_line(*raw));
        } else {
            const json& frame = std::get<json>(in);
            if (frame.is_object() && frame.value("type", "") == "gaze" && frame.contains("t_us") &&
                frame.at("t_us").is_number_integer()) {
                const auto t = frame.at("t_us").get<std::int64_t>();
                if (!first_t) first_t = t;
                last_t = t;
                if (options.speed && *options.speed > 0.0) {
                    const auto due = wall_start + std::chrono::duration_cast<clock::duration>(
                                                      std::chrono::duration<double, std::micro>(
                                                          static_cast<double>(t - *first_t) / *options.speed));
                    std::this_thread::sleep_until(due);
                }
            }
            deliver(session.handle_frame(frame));
        }
        ++result.inbound_count;
        if (session.closed()) break;
    }
    deliver(session.finish());

    result.wall_time_s = std::chrono::duration<double>(clock::now() - wall_start).count();
    if (first_t) result.stream_span_s = static_cast<double>(*last_t - *first_t) / 1e6;

    if (result.has_recording) {
        const std::size_t n = std::min(file.outbound.size(), result.outbound.size());
        for (std::size_t i = 0; i < n && !result.first_mismatch; ++i)
            if (wire::comparable(file.outbound[i]) != wire::comparable(result.outbound[i])) result.first_mismatch = i;
        if (!result.first_mismatch && file.outbound.size() != result.outbound.size()) result.first_mismatch = n;
    }
    return result;
}

ReplayResult replay_file(const std::filesystem::path& path, const ReplayOptions& options,
                         const std::function<void(const json&)>& sink) {
    return replay(read_session_file(path), options, sink);
}

}  // namespace gazeinspect
