#include "gazeinspect/server.hpp"

#include <chrono>
#include <condition_variable>
#include <cstring>
#include <iostream>
#include <string_view>

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>

namespace gazeinspect {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;
using nlohmann::json;

std::pair<std::string, std::uint16_t> parse_bind_address(const std::string& bind) {
    const auto colon = bind.rfind(':');
    if (colon == std::string::npos) throw std::invalid_argument("bind address must look like host:port");
    std::string host = bind.substr(0, colon);
    if (host.empty()) host = "0.0.0.0";
    const int port = std::stoi(bind.substr(colon + 1));
    if (port < 0 || port > 65535) throw std::invalid_argument("port out of range");
    return {host, static_cast<std::uint16_t>(port)};
}

namespace {

// True when the connection opens with an HTTP request line.
bool looks_like_http(tcp::socket& sock) {
    char head[4];
    for (;;) {
        boost::system::error_code ec;
        const std::size_t n = sock.receive(asio::buffer(head), tcp::socket::message_peek, ec);
        if (ec || n == 0) return false;
        if (n >= 4) return std::memcmp(head, "GET ", 4) == 0;
        if (std::memchr(head, '\n', n) != nullptr) return false;
        std::this_thread::sleep_for(std::chrono::milliseconds(1));
    }
}

}  // namespace

struct SessionServer::Impl : std::enable_shared_from_this<SessionServer::Impl> {
    SessionServer& owner;
    asio::io_context ioc;
    tcp::acceptor acceptor{ioc};
    std::thread io_thread;

    std::mutex mutex;
    std::condition_variable cv;
    std::set<tcp::socket*> live;  // sockets a worker may be blocked on
    std::size_t workers{0};
    bool stopping{false};
    bool stopped{false};

    explicit Impl(SessionServer& o) : owner(o) {}

    void accept_next() {
        acceptor.async_accept([this](boost::system::error_code ec, tcp::socket sock) {
            if (ec) return;  // acceptor closed
            {
                std::lock_guard lock(mutex);
                if (stopping) return;
                ++workers;
            }
            std::thread([self = shared_from_this(), s = std::move(sock)]() mutable { self->serve(std::move(s)); })
                .detach();
            accept_next();
        });
    }

    void track(tcp::socket* sock) {
        std::lock_guard lock(mutex);
        live.insert(sock);
        if (stopping) {
            boost::system::error_code ec;
            sock->shutdown(tcp::socket::shutdown_both, ec);
        }
    }

    void untrack(tcp::socket* sock) {
        std::lock_guard lock(mutex);
        live.erase(sock);
    }

    void serve(tcp::socket sock) {
        const std::string id = make_session_id();
        try {
            std::unique_ptr<SessionLog> log;
            std::filesystem::path log_path;
            if (owner.options_.sessions_dir) {
                log_path = *owner.options_.sessions_dir / (id + ".jsonl");
                log = std::make_unique<SessionLog>(log_path);
            }
            Session session(id, owner.options_.config, std::move(log));
            owner.registry_.insert(id, log_path);

            track(&sock);
            const bool http = looks_like_http(sock);
            untrack(&sock);
            if (http) serve_websocket(std::move(sock), session);
            else serve_lines(sock, session);
        } catch (const std::exception& e) {
            std::cerr << "session " << id << ": " << e.what() << '\n';
        }
        owner.registry_.remove(id);

        std::lock_guard lock(mutex);
        --workers;
        cv.notify_all();
    }

    void serve_websocket(tcp::socket sock, Session& session) {
        websocket::stream<tcp::socket> ws(std::move(sock));
        track(&ws.next_layer());
        auto send = [&](const std::vector<json>& frames) {
            for (const auto& f : frames) {
                ws.text(true);
                ws.write(asio::buffer(f.dump()));
            }
        };
        try {
            ws.accept();
            beast::flat_buffer buffer;
            while (!session.closed()) {
                ws.read(buffer);
                const std::string payload = beast::buffers_to_string(buffer.data());
                buffer.consume(buffer.size());
                // a message may carry several newline-delimited frames
                std::string_view rest(payload);
                while (!rest.empty() && !session.closed()) {
                    const auto nl = rest.find('\n');
                    send(session.handle_line(rest.substr(0, nl)));
                    rest = nl == std::string_view::npos ? std::string_view{} : rest.substr(nl + 1);
                }
            }
            send(session.finish());
            ws.close(websocket::close_code::policy_error);
        } catch (const boost::system::system_error&) {
            session.finish();  // peer is gone; still close the pending event in the log
        }
        untrack(&ws.next_layer());
    }

    void serve_lines(tcp::socket& sock, Session& session) {
        track(&sock);
        auto send = [&](const std::vector<json>& frames) {
            std::string out;
            for (const auto& f : frames) out += f.dump() + '\n';
            if (!out.empty()) asio::write(sock, asio::buffer(out));
        };
        try {
            asio::streambuf buf;
            std::string line;
            for (;;) {
                boost::system::error_code ec;
                asio::read_until(sock, buf, '\n', ec);
                if (ec && buf.size() == 0) break;
                std::istream is(&buf);
                std::getline(is, line);
                send(session.handle_line(line));
                if (session.closed() || ec) break;
            }
            send(session.finish());
            boost::system::error_code ignored;
            sock.shutdown(tcp::socket::shutdown_both, ignored);
        } catch (const boost::system::system_error&) {
            session.finish();
        }
        untrack(&sock);
    }
};

SessionServer::SessionServer(ServerOptions options)
    : impl_(std::make_shared<Impl>(*this)), options_(std::move(options)) {
    options_.config.validate();
}

SessionServer::~SessionServer() { stop(); }

void SessionServer::start() {
    if (options_.sessions_dir) std::filesystem::create_directories(*options_.sessions_dir);

    const tcp::endpoint endpoint(asio::ip::make_address(options_.address), options_.port);
    impl_->acceptor.open(endpoint.protocol());
    impl_->acceptor.set_option(asio::socket_base::reuse_address(true));
    impl_->acceptor.bind(endpoint);
    impl_->acceptor.listen();
    bound_port_ = impl_->acceptor.local_endpoint().port();

    impl_->accept_next();
    impl_->io_thread = std::thread([this] { impl_->ioc.run(); });
}

void SessionServer::stop() {
    {
        std::lock_guard lock(impl_->mutex);
        if (impl_->stopped || impl_->stopping) return;
        impl_->stopping = true;
    }
    asio::post(impl_->ioc, [this] {
        boost::system::error_code ec;
        impl_->acceptor.close(ec);
    });
    if (impl_->io_thread.joinable()) impl_->io_thread.join();

    std::unique_lock lock(impl_->mutex);
    for (tcp::socket* s : impl_->live) {
        boost::system::error_code ec;
        s->shutdown(tcp::socket::shutdown_both, ec);
    }
    impl_->cv.wait(lock, [this] { return impl_->workers == 0; });
    impl_->stopped = true;
    impl_->cv.notify_all();
}

void SessionServer::wait() {
    std::unique_lock lock(impl_->mutex);
    impl_->cv.wait(lock, [this] { return impl_->stopped; });
}

}  // namespace gazeinspect
