// gazeinspect: serve, replay, simulate and report gaze inspection sessions.

#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numeric>
#include <pthread.h>

#include <CLI11.hpp>

#include "gazeinspect/replay.hpp"
#include "gazeinspect/report.hpp"
#include "gazeinspect/server.hpp"
#include "gazeinspect/sim_harness.hpp"

namespace gi = gazeinspect;
using nlohmann::json;

namespace {

int run_serve(const std::string& bind, const std::string& config_path, const std::string& sessions_dir) {
    // Block the shutdown signals before any worker thread exists so only
    // sigwait below ever sees them.
    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &signals, nullptr);

    gi::ServerOptions options;
    std::tie(options.address, options.port) = gi::parse_bind_address(bind);
    if (!config_path.empty()) options.config = gi::load_pipeline_config(config_path);
    if (!sessions_dir.empty()) options.sessions_dir = sessions_dir;

    gi::SessionServer server(options);
    server.start();
    std::cerr << "listening on " << options.address << ':' << server.port() << '\n';

    int sig = 0;
    sigwait(&signals, &sig);
    std::cerr << "shutting down (" << server.registry().size() << " live sessions)\n";
    server.stop();
    return 0;
}

std::optional<double> parse_speed(const std::string& s) {
    if (s == "max") return std::nullopt;
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size() || !(v > 0.0)) throw CLI::ValidationError("--speed", "expected a positive number or 'max'");
    return v;
}

int run_replay(const std::string& file, const std::string& speed, const std::string& out_path,
               const std::string& config_path) {
    gi::ReplayOptions options;
    options.speed = parse_speed(speed);
    if (!config_path.empty()) options.config = gi::load_pipeline_config(config_path);

    std::ofstream out_file;
    if (!out_path.empty()) {
        out_file.open(out_path);
        if (!out_file) throw std::runtime_error("cannot write " + out_path);
    }
    std::ostream& out = out_path.empty() ? std::cout : out_file;

    const auto result = gi::replay_file(file, options, [&](const json& f) { out << f.dump() << '\n'; });
    out.flush();

    std::cerr << result.inbound_count << " inbound, " << result.outbound.size() << " outbound frames";
    if (result.stream_span_s > 0.0 && result.wall_time_s > 0.0)
        std::cerr << ", " << result.stream_span_s / result.wall_time_s << "x real time";
    std::cerr << '\n';
    if (result.has_recording) {
        if (result.first_mismatch) {
            std::cerr << "replay diverges from the recording at outbound frame " << *result.first_mismatch << '\n';
            return 2;
        }
        std::cerr << "replay matches the recording\n";
    }
    return 0;
}

int run_simulate(const std::string& scene_path, std::size_t trials, std::uint64_t seed, const std::string& out_path,
                 std::optional<double> noise_scale) {
    auto sim = gi::sim::load_simulation(scene_path);
    if (noise_scale) sim.noise.scale = *noise_scale;
    const auto reports = gi::sim::run_trials(sim, trials, seed);

    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot write " + out_path);
    for (const auto& r : reports) out << gi::sim::to_json(r).dump() << '\n';

    std::size_t ok = 0;
    double da = 0.0, dz = 0.0, dxy = 0.0;
    for (const auto& r : reports) {
        if (r.failed) continue;
        ++ok;
        da += r.delta_a_pct;
        dz += r.delta_d_z_pct;
        dxy += r.delta_d_xy_pct;
    }
    std::cerr << reports.size() << " reports, " << reports.size() - ok << " failed";
    if (ok > 0)
        std::cerr << "; mean dA " << da / ok << "%, dd_z " << dz / ok << "%, dd_xy " << dxy / ok << '%';
    std::cerr << '\n';
    return ok == reports.size() ? 0 : 3;
}

int run_report(const std::string& file) {
    const auto summary = gi::summarize(gi::read_session_file(file));
    for (const auto& w : summary.warnings) std::cerr << "warning: " << w << '\n';
    std::cout << gi::to_json(summary).dump(2) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gaze-driven inspection: attention tracking, defect estimation and camera pose planning"};
    app.require_subcommand(1);

    auto* serve = app.add_subcommand("serve", "Accept WebSocket and NDJSON TCP gaze sessions");
    std::string bind = "127.0.0.1:8765", config, sessions_dir = "sessions";
    serve->add_option("--bind", bind, "host:port to listen on")->capture_default_str();
    serve->add_option("--config", config, "pipeline config JSON")->check(CLI::ExistingFile);
    serve->add_option("--sessions-dir", sessions_dir, "where session JSONL logs go ('' disables)")
        ->capture_default_str();

    auto* replay = app.add_subcommand("replay", "Re-run a recorded session or raw sample log");
    std::string replay_file, speed = "max", replay_out, replay_config;
    replay->add_option("file", replay_file, "session JSONL or raw sample log")->required();
    replay->add_option("--speed", speed, "real-time multiplier or 'max'")->capture_default_str();
    replay->add_option("--out", replay_out, "write outbound frames here instead of stdout");
    replay->add_option("--config", replay_config, "override the recorded pipeline config")
        ->check(CLI::ExistingFile);

    auto* simulate = app.add_subcommand("simulate", "Run simulated inspection trials");
    std::string scene, sim_out;
    std::size_t trials = 3;
    std::uint64_t seed = 1;
    std::optional<double> noise_scale;
    simulate->add_option("--scene", scene, "scene/script/noise JSON")->required()->check(CLI::ExistingFile);
    simulate->add_option("--trials", trials, "independent trials")->capture_default_str()->check(CLI::PositiveNumber);
    simulate->add_option("--seed", seed, "base seed; trial i uses seed + i")->capture_default_str();
    simulate->add_option("--out", sim_out, "TrialReport JSONL")->required();
    simulate->add_option("--noise-scale", noise_scale, "override the noise scale");

    auto* report = app.add_subcommand("report", "Summarize a session log");
    std::string report_file;
    report->add_option("file", report_file, "session JSONL or raw sample log")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*serve) return run_serve(bind, config, sessions_dir);
        if (*replay) return run_replay(replay_file, speed, replay_out, replay_config);
        if (*simulate) return run_simulate(scene, trials, seed, sim_out, noise_scale);
        if (*report) return run_report(report_file);
    } catch (const CLI::Error& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
