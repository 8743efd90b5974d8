#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "gazeinspect/config.hpp"
#include "gazeinspect/session.hpp"

namespace gazeinspect {

struct ServerOptions {
    std::string address{"127.0.0.1"};
    std::uint16_t port{0};  // 0 picks a free port
    PipelineConfig config{};
    std::optional<std::filesystem::path> sessions_dir;  // one <session_id>.jsonl per connection
};

/// Parses "host:port".
std::pair<std::string, std::uint16_t> parse_bind_address(const std::string& bind);

/// Accepts WebSocket and plain-TCP connections on one port. A connection whose
/// first bytes are an HTTP GET is upgraded to WebSocket; anything else is read
/// as newline-delimited JSON. Each connection is one session with its own
/// pipeline, served on its own thread.
class SessionServer {
public:
    explicit SessionServer(ServerOptions options);
    ~SessionServer();

    SessionServer(const SessionServer&) = delete;
    SessionServer& operator=(const SessionServer&) = delete;

    void start();
    void stop();
    /// Blocks until stop() is called from another thread or a signal handler.
    void wait();

    std::uint16_t port() const { return bound_port_; }
    const SessionRegistry& registry() const { return registry_; }

private:
    struct Impl;
    std::shared_ptr<Impl> impl_;  // workers hold a reference until they exit
    ServerOptions options_;
    SessionRegistry registry_;
    std::uint16_t bound_port_{0};
};

}  // namespace gazeinspect
