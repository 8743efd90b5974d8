#include "gazeinspect/session.hpp"

#include <chrono>
#include <ctime>
#include <iomanip>
#include <sstream>

#include <boost/uuid/random_generator.hpp>
#include <boost/uuid/uuid_io.hpp>

namespace gazeinspect {

using nlohmann::json;

std::string make_session_id() {
    thread_local boost::uuids::random_generator gen;
    return boost::uuids::to_string(gen());
}

std::string utc_timestamp_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

SessionLog::SessionLog(const std::filesystem::path& path) : path_(path), out_(path, std::ios::app) {
    if (!out_) throw std::runtime_error("cannot open session log " + path.string());
}

void SessionLog::header(std::string_view session_id, std::string_view started_at, const PipelineConfig& config) {
    write({{"type", "session"},
           {"session_id", session_id},
           {"started_at", started_at},
           {"protocol", wire::kProtocolVersion},
           {"config", to_json(config)}});
}

void SessionLog::inbound(const json& frame) { write({{"dir", "in"}, {"frame", frame}}); }
void SessionLog::inbound_raw(std::string_view line) { write({{"dir", "in"}, {"raw", line}}); }
void SessionLog::outbound(const json& frame) { write({{"dir", "out"}, {"frame", frame}}); }

void SessionLog::write(const json& line) {
    out_ << line.dump() << '\n';
    out_.flush();
}

Session::Session(std::string id, PipelineConfig config, std::unique_ptr<SessionLog> log)
    : id_(std::move(id)), pipeline_(config), log_(std::move(log)) {
    if (log_) log_->header(id_, utc_timestamp_now(), pipeline_.config());
}

std::vector<json> Session::handle_line(std::string_view line) {
    // tolerate CRLF framing from telnet-style clients
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.remove_suffix(1);
    if (line.empty()) return {};

    json frame = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (frame.is_discarded()) {
        if (log_) log_->inbound_raw(line);
        std::vector<json> out;
        emit(wire::ErrorMsg{std::string(wire::code::kBadMessage), "invalid JSON"}, out);
        return out;
    }
    return handle_frame(frame);
}

std::vector<json> Session::handle_frame(const json& frame) {
    if (log_) log_->inbound(frame);
    return handle_parsed(frame);
}

std::vector<json> Session::handle_parsed(const json& frame) {
    std::vector<json> out;
    if (closed_) return out;

    wire::Inbound msg;
    try {
        msg = wire::decode_inbound(frame);
    } catch (const wire::BadMessage& e) {
        emit(wire::ErrorMsg{std::string(wire::code::kBadMessage), e.what()}, out);
        return out;
    }

    if (const auto* hello = std::get_if<wire::HelloMsg>(&msg)) {
        if (hello->version != wire::kProtocolVersion) {
            emit(wire::ErrorMsg{std::string(wire::code::kProtocolVersion),
                                "server speaks protocol " + std::to_string(wire::kProtocolVersion) +
                                    ", client sent " + std::to_string(hello->version)},
                 out);
            closed_ = true;
        }
        return out;
    }

    try {
        for (const auto& m : pipeline_.process(std::get<GazeSample>(msg))) emit(m, out);
    } catch (const SampleRejected& e) {
        emit(wire::ErrorMsg{std::string(wire::code::kRejectedSample), e.what()}, out);
    }
    return out;
}

std::vector<json> Session::finish() {
    std::vector<json> out;
    if (finished_) return out;
    finished_ = true;
    if (closed_) return out;
    for (const auto& m : pipeline_.flush()) emit(m, out);
    return out;
}

void Session::emit(const wire::Outbound& msg, std::vector<json>& out) {
    json frame = wire::encode(msg, seq_++, id_);
    if (log_) log_->outbound(frame);
    out.push_back(std::move(frame));
}

void SessionRegistry::insert(const std::string& id, std::filesystem::path log_path) {
    std::lock_guard lock(mutex_);
    sessions_.emplace(id, std::move(log_path));
}

void SessionRegistry::remove(const std::string& id) {
    std::lock_guard lock(mutex_);
    sessions_.erase(id);
}

std::size_t SessionRegistry::size() const {
    std::lock_guard lock(mutex_);
    return sessions_.size();
}

std::vector<std::string> SessionRegistry::ids() const {
    std::lock_guard lock(mutex_);
    std::vector<std::string> out;
    for (const auto& [id, path] : sessions_) out.push_back(id);
    return out;
}

}  // namespace gazeinspect
