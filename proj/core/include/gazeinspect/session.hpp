#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "gazeinspect/pipeline.hpp"

namespace gazeinspect {

std::string make_session_id();
std::string utc_timestamp_now();

/// Append-only JSONL record of one session:
///   {"type":"session","session_id":..,"started_at":..,"protocol":1,"config":{..}}
///   {"dir":"in","frame":{..}}        parsed inbound frame
///   {"dir":"in","raw":".."}          inbound line that was not valid JSON
///   {"dir":"out","frame":{..}}
class SessionLog {
public:
    explicit SessionLog(const std::filesystem::path& path);

    void header(std::string_view session_id, std::string_view started_at, const PipelineConfig& config);
    void inbound(const nlohmann::json& frame);
    void inbound_raw(std::string_view line);
    void outbound(const nlohmann::json& frame);

    const std::filesystem::path& path() const { return path_; }

private:
    void write(const nlohmann::json& line);

    std::filesystem::path path_;
    std::ofstream out_;
};

/// One connection's worth of protocol handling: parses inbound lines, runs the
/// pipeline and returns serialized outbound frames with gapless sequence numbers.
class Session {
public:
    Session(std::string id, PipelineConfig config, std::unique_ptr<SessionLog> log = nullptr);

    std::vector<nlohmann::json> handle_line(std::string_view line);
    std::vector<nlohmann::json> handle_frame(const nlohmann::json& frame);

    /// End of stream; closes any pending fixation.
    std::vector<nlohmann::json> finish();

    /// Set after a protocol version mismatch; the transport should disconnect.
    bool closed() const { return closed_; }
    const std::string& id() const { return id_; }
    std::uint64_t next_seq() const { return seq_; }

private:
    void emit(const wire::Outbound& msg, std::vector<nlohmann::json>& out);
    std::vector<nlohmann::json> handle_parsed(const nlohmann::json& frame);

    std::string id_;
    InspectionPipeline pipeline_;
    std::unique_ptr<SessionLog> log_;
    std::uint64_t seq_{0};
    bool closed_{false};
    bool finished_{false};
};

/// Live sessions of a server. Safe for concurrent insert/remove.
class SessionRegistry {
public:
    void insert(const std::string& id, std::filesystem::path log_path);
    void remove(const std::string& id);
    std::size_t size() const;
    std::vector<std::string> ids() const;

private:
    mutable std::mutex mutex_;
    std::map<std::string, std::filesystem::path> sessions_;
};

}  // namespace gazeinspect
