#include <gtest/gtest.h>

#include <chrono>
#include <filesystem>
#include <future>
#include <thread>

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>

#include "fixtures.hpp"
#include "gazeinspect/replay.hpp"
#include "gazeinspect/server.hpp"
#include "gazeinspect/wire.hpp"

using namespace gazeinspect;
using nlohmann::json;
namespace asio = boost::asio;
namespace websocket = boost::beast::websocket;
using tcp = asio::ip::tcp;

namespace {

struct LineClient {
    asio::io_context ioc;
    tcp::socket sock{ioc};
    asio::streambuf buf;

    explicit LineClient(std::uint16_t port) { sock.connect({asio::ip::make_address("127.0.0.1"), port}); }

    void send(const std::string& line) { asio::write(sock, asio::buffer(line + "\n")); }
    void send(const GazeSample& s) { send(wire::encode_gaze(s).dump()); }
    void done() { sock.shutdown(tcp::socket::shutdown_send); }

    // Reads one frame; empty optional on EOF.
    std::optional<json> read() {
        boost::system::error_code ec;
        asio::read_until(sock, buf, '\n', ec);
        if (ec && buf.size() == 0) return std::nullopt;
        std::istream is(&buf);
        std::string line;
        std::getline(is, line);
        return json::parse(line);
    }

    std::vector<json> read_all() {
        std::vector<json> out;
        while (auto f = read()) out.push_back(std::move(*f));
        return out;
    }
};

struct WsClient {
    asio::io_context ioc;
    websocket::stream<tcp::socket> ws{ioc};
    boost::beast::flat_buffer buf;

    explicit WsClient(std::uint16_t port) {
        ws.next_layer().connect({asio::ip::make_address("127.0.0.1"), port});
        ws.handshake("127.0.0.1:" + std::to_string(port), "/");
        ws.text(true);
    }

    void send(const std::string& text) { ws.write(asio::buffer(text)); }

    json read() {
        buf.consume(buf.size());
        ws.read(buf);
        return json::parse(boost::beast::buffers_to_string(buf.data()));
    }
};

// What a session produces for `samples` without the transport.
std::vector<json> offline(const std::vector<GazeSample>& samples, bool finish = true) {
    Session s("offline", {});
    std::vector<json> out;
    for (const auto& g : samples)
        for (auto& f : s.handle_frame(wire::encode_gaze(g))) out.push_back(std::move(f));
    if (finish)
        for (auto& f : s.finish()) out.push_back(std::move(f));
    return out;
}

std::vector<json> comparable(const std::vector<json>& frames) {
    std::vector<json> out;
    for (const auto& f : frames) out.push_back(wire::comparable(f));
    return out;
}

std::size_t count_type(const std::vector<json>& frames, const std::string& type) {
    std::size_t n = 0;
    for (const auto& f : frames) n += f["type"] == type;
    return n;
}

std::size_t transitions(const std::vector<json>& frames) {
    std::size_t n = 0;
    std::string level = "scanning";
    for (const auto& f : frames) {
        if (f["type"] != "attention") continue;
        n += f["level"] != level;
        level = f["level"];
    }
    return n;
}

std::unique_ptr<SessionServer> start_server(ServerOptions o = {}) {
    o.address = "127.0.0.1";
    o.port = 0;
    auto server = std::make_unique<SessionServer>(std::move(o));
    server->start();
    return server;
}

template <class Pred>
bool eventually(Pred p, std::chrono::milliseconds limit = std::chrono::milliseconds(3000)) {
    const auto end = std::chrono::steady_clock::now() + limit;
    while (std::chrono::steady_clock::now() < end) {
        if (p()) return true;
        std::this_thread::sleep_for(std::chrono::milliseconds(5));
    }
    return p();
}

}  // namespace

TEST(BindAddress, Parses) {
    EXPECT_EQ(parse_bind_address("127.0.0.1:8765"), (std::pair<std::string, std::uint16_t>{"127.0.0.1", 8765}));
    EXPECT_EQ(parse_bind_address(":9000").first, "0.0.0.0");
    EXPECT_THROW(parse_bind_address("localhost"), std::invalid_argument);
    EXPECT_THROW(parse_bind_address("h:70000"), std::invalid_argument);
    EXPECT_ANY_THROW(parse_bind_address("h:port"));
}

TEST(Server, TcpScriptedInspectYieldsOnePose) {
    auto server = start_server();
    const auto samples = fixtures::corner_walk(600);
    LineClient c(server->port());
    for (const auto& s : samples) c.send(s);
    c.done();
    const auto got = c.read_all();

    EXPECT_GE(transitions(got), 1u);
    EXPECT_EQ(count_type(got, "pose"), 1u);
    EXPECT_EQ(count_type(got, "error"), 0u);
    EXPECT_EQ(comparable(got), comparable(offline(samples)));
    for (std::size_t i = 0; i < got.size(); ++i) EXPECT_EQ(got[i]["seq"].get<std::size_t>(), i);
}

TEST(Server, WebSocketScriptedInspectYieldsOnePose) {
    auto server = start_server();
    const auto samples = fixtures::corner_walk(600);
    const auto want = offline(samples, /*finish=*/false);

    WsClient c(server->port());
    // one frame per message for the first half, newline-batched messages after
    std::string batch;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto line = wire::encode_gaze(samples[i]).dump();
        if (i < 300) {
            c.send(line);
        } else {
            batch += line + "\n";
            if (batch.size() > 2000) {
                c.send(batch);
                batch.clear();
            }
        }
    }
    if (!batch.empty()) c.send(batch);

    std::vector<json> got;
    for (std::size_t i = 0; i < want.size(); ++i) got.push_back(c.read());
    c.ws.close(websocket::close_code::normal);

    EXPECT_GE(transitions(got), 1u);
    EXPECT_EQ(count_type(got, "pose"), 1u);
    EXPECT_EQ(comparable(got), comparable(want));
}

TEST(Server, MalformedLineGetsErrorAndSessionContinues) {
    auto server = start_server();
    const auto samples = fixtures::corner_walk(600);
    LineClient c(server->port());
    c.send("{\"type\":\"gaze\",");
    const auto err = c.read();
    ASSERT_TRUE(err);
    EXPECT_EQ((*err)["type"], "error");
    EXPECT_EQ((*err)["code"], "bad_message");
    EXPECT_EQ((*err)["seq"], 0);

    c.send("[1,2,3]");
    const auto err2 = c.read();
    ASSERT_TRUE(err2);
    EXPECT_EQ((*err2)["code"], "bad_message");

    for (const auto& s : samples) c.send(s);
    c.done();
    const auto rest = c.read_all();
    EXPECT_EQ(count_type(rest, "pose"), 1u);
    EXPECT_EQ(rest.front()["seq"], 2);
}

TEST(Server, WebSocketMalformedMessage) {
    auto server = start_server();
    WsClient c(server->port());
    c.send("not json at all");
    const auto err = c.read();
    EXPECT_EQ(err["type"], "error");
    EXPECT_EQ(err["code"], "bad_message");
    // still open
    c.send(R"({"type":"hello","version":1})");
    c.send(R"({"type":"gaze"})");
    EXPECT_EQ(c.read()["code"], "bad_message");
    c.ws.close(websocket::close_code::normal);
}

TEST(Server, ConcurrentSessionsAreIsolated) {
    auto server = start_server();
    const auto a = fixtures::corner_walk(600);
    const auto b = fixtures::session_stream(4).samples;
    const auto want_a = comparable(offline(a));
    const auto want_b = comparable(offline(b));

    // interleave the two streams sample by sample from two threads
    std::promise<void> go;
    auto run = [&, ready = go.get_future().share()](const std::vector<GazeSample>& samples) {
        LineClient c(server->port());
        ready.wait();
        for (std::size_t i = 0; i < samples.size(); ++i) {
            c.send(samples[i]);
            if (i % 50 == 0) std::this_thread::yield();
        }
        c.done();
        return c.read_all();
    };
    auto fa = std::async(std::launch::async, run, std::cref(a));
    auto fb = std::async(std::launch::async, run, std::cref(b));
    go.set_value();
    const auto got_a = fa.get();
    const auto got_b = fb.get();

    EXPECT_EQ(comparable(got_a), want_a);
    EXPECT_EQ(comparable(got_b), want_b);
    ASSERT_FALSE(got_a.empty());
    ASSERT_FALSE(got_b.empty());
    EXPECT_NE(got_a[0]["session"], got_b[0]["session"]);
    for (const auto& f : got_a) EXPECT_EQ(f["session"], got_a[0]["session"]);
}

TEST(Server, VersionMismatchClosesTcp) {
    auto server = start_server();
    LineClient c(server->port());
    c.send(R"({"type":"hello","version":99})");
    const auto err = c.read();
    ASSERT_TRUE(err);
    EXPECT_EQ((*err)["type"], "error");
    EXPECT_EQ((*err)["code"], "protocol_version");
    EXPECT_FALSE(c.read().has_value());  // server hung up
}

TEST(Server, VersionMismatchClosesWebSocket) {
    auto server = start_server();
    WsClient c(server->port());
    c.send(R"({"type":"hello","version":2})");
    const auto err = c.read();
    EXPECT_EQ(err["code"], "protocol_version");
    boost::system::error_code ec;
    c.ws.read(c.buf, ec);
    EXPECT_EQ(ec, websocket::error::closed);
    EXPECT_EQ(c.ws.reason().code, websocket::close_code::policy_error);
}

TEST(Server, MatchingHelloIsSilent) {
    auto server = start_server();
    LineClient c(server->port());
    c.send(R"({"type":"hello","version":1})");
    c.done();
    EXPECT_TRUE(c.read_all().empty());
}

TEST(Server, ShortFirstLineIsNotMistakenForHttp) {
    auto server = start_server();
    LineClient c(server->port());
    c.send("");
    c.send("{}");
    c.done();
    const auto got = c.read_all();
    ASSERT_EQ(got.size(), 1u);
    EXPECT_EQ(got[0]["code"], "bad_message");
}

TEST(Server, StopsWithIdleClientsConnected) {
    auto server = start_server();
    LineClient idle_tcp(server->port());
    WsClient idle_ws(server->port());
    ASSERT_TRUE(eventually([&] { return server->registry().size() == 2; }));

    const auto t0 = std::chrono::steady_clock::now();
    server->stop();
    EXPECT_LT(std::chrono::steady_clock::now() - t0, std::chrono::seconds(2));
    EXPECT_EQ(server->registry().size(), 0u);
    EXPECT_FALSE(idle_tcp.read().has_value());

    // wait() returns at once after stop
    auto w = std::async(std::launch::async, [&] { server->wait(); });
    EXPECT_EQ(w.wait_for(std::chrono::seconds(2)), std::future_status::ready);
    server->stop();  // idempotent
}

TEST(Server, WaitReturnsWhenStoppedElsewhere) {
    auto server = start_server();
    auto w = std::async(std::launch::async, [&] { server->wait(); });
    EXPECT_EQ(w.wait_for(std::chrono::milliseconds(100)), std::future_status::timeout);
    server->stop();
    EXPECT_EQ(w.wait_for(std::chrono::seconds(2)), std::future_status::ready);
}

TEST(Server, RegistryTracksLiveSessions) {
    auto server = start_server();
    {
        LineClient c1(server->port());
        LineClient c2(server->port());
        ASSERT_TRUE(eventually([&] { return server->registry().size() == 2; }));
        c1.done();
        (void)c1.read_all();
        ASSERT_TRUE(eventually([&] { return server->registry().size() == 1; }));
    }
    EXPECT_TRUE(eventually([&] { return server->registry().size() == 0; }));
}

TEST(Server, PersistsReplayableSessionLog) {
    const auto dir = std::filesystem::temp_directory_path() / ("gazeinspect_sessions_" + make_session_id());
    ServerOptions o;
    o.sessions_dir = dir;
    auto server = start_server(o);
    const auto samples = fixtures::corner_walk(600);
    LineClient c(server->port());
    c.send("garbage");
    for (const auto& s : samples) c.send(s);
    c.done();
    const auto got = c.read_all();
    server->stop();

    std::vector<std::filesystem::path> logs;
    for (const auto& e : std::filesystem::directory_iterator(dir)) logs.push_back(e.path());
    ASSERT_EQ(logs.size(), 1u);
    EXPECT_EQ(logs[0].stem().string(), got.front()["session"].get<std::string>());

    const auto file = read_session_file(logs[0]);
    ASSERT_TRUE(file.header);
    EXPECT_EQ(file.inbound.size(), samples.size() + 1);
    EXPECT_EQ(file.outbound, got);
    const auto r = replay(file, {});
    EXPECT_FALSE(r.first_mismatch.has_value());
    std::filesystem::remove_all(dir);
}

TEST(Server, InvalidConfigIsRejected) {
    ServerOptions o;
    o.config.attention.window_s = -1.0;
    EXPECT_ANY_THROW(SessionServer{o});
}
