#include "soasim/cli/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

namespace soasim::cli {

namespace {

using scenario::Mode;
using scenario::SweepResult;

struct TimingFlags {
    std::uint64_t link_rate_bps{1'000'000'000};
    std::uint64_t control_link_rate_bps{1'000'000'000};
    double forwarding_delay_us{8};
    double controller_processing_us{100};
    double switch_processing_us{100};
    std::uint32_t control_frame_bytes{128};
    std::uint32_t offer_ttl{3};
    std::uint32_t find_ttl{3};
    std::uint32_t subscribe_ttl{3};
    double limit_s{10};
    std::string vanilla_scope{"hop"};
    bool vanilla_flood_rules{true};
};

const std::vector<std::string> kModeNames{"ethernet", "sdn-vanilla", "sdn-optimized"};

void add_timing(CLI::App& cmd, TimingFlags& t) {
    const char* g = "Timing";
    cmd.add_option("--link-rate-bps", t.link_rate_bps, "Data link rate in bit/s")
        ->capture_default_str()
        ->check(CLI::PositiveNumber)
        ->group(g);
    cmd.add_option("--control-link-rate-bps", t.control_link_rate_bps,
                   "Rate of each switch-to-controller channel in bit/s")
        ->capture_default_str()
        ->check(CLI::PositiveNumber)
        ->group(g);
    cmd.add_option("--forwarding-delay-us", t.forwarding_delay_us,
                   "Switch hardware forwarding delay in microseconds")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber)
        ->group(g);
    cmd.add_option("--controller-processing-us", t.controller_processing_us,
                   "Controller time per packet-in in microseconds")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber)
        ->group(g);
    cmd.add_option("--switch-processing-us", t.switch_processing_us,
                   "Switch time per flow-mod or packet-out in microseconds")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber)
        ->group(g);
    cmd.add_option("--control-frame-bytes", t.control_frame_bytes,
                   "Size of every control-channel message")
        ->capture_default_str()
        ->check(CLI::Range(64, 9000))
        ->group(g);
    cmd.add_option("--offer-ttl", t.offer_ttl, "Offer TTL in seconds")
        ->capture_default_str()
        ->check(CLI::Range(1, 0xFFFFFF))
        ->group(g);
    cmd.add_option("--find-ttl", t.find_ttl, "Find TTL in seconds")
        ->capture_default_str()
        ->check(CLI::Range(1, 0xFFFFFF))
        ->group(g);
    cmd.add_option("--subscribe-ttl", t.subscribe_ttl, "Subscribe TTL in seconds")
        ->capture_default_str()
        ->check(CLI::Range(1, 0xFFFFFF))
        ->group(g);
    cmd.add_option("--limit-s", t.limit_s, "Simulated time limit per run in seconds")
        ->capture_default_str()
        ->check(CLI::PositiveNumber)
        ->group(g);
    cmd.add_option("--vanilla-scope", t.vanilla_scope,
                   "Vanilla SDN rule scope: hop (switch that asked) or path")
        ->capture_default_str()
        ->check(CLI::IsMember({"hop", "path"}))
        ->group(g);
    cmd.add_option("--vanilla-flood-rules", t.vanilla_flood_rules,
                   "Vanilla SDN installs flood rules for group traffic")
        ->capture_default_str()
        ->group(g);
}

sim::SimTime us_to_ns(double us) { return static_cast<sim::SimTime>(std::llround(us * 1000.0)); }

void apply_timing(const TimingFlags& t, scenario::ScenarioConfig& cfg) {
    cfg.timing.link_rate_bps = t.link_rate_bps;
    cfg.timing.control_link_rate_bps = t.control_link_rate_bps;
    cfg.timing.forwarding_delay = us_to_ns(t.forwarding_delay_us);
    cfg.timing.controller_processing = us_to_ns(t.controller_processing_us);
    cfg.timing.switch_processing = us_to_ns(t.switch_processing_us);
    cfg.timing.control_frame_bytes = t.control_frame_bytes;
    cfg.offer_ttl = t.offer_ttl;
    cfg.find_ttl = t.find_ttl;
    cfg.subscribe_ttl = t.subscribe_ttl;
    cfg.limit = static_cast<sim::SimTime>(std::llround(t.limit_s * 1e9));
    cfg.vanilla.scope =
        t.vanilla_scope == "path" ? ctrl::LearningScope::PathWide : ctrl::LearningScope::HopByHop;
    cfg.vanilla.flood_rules = t.vanilla_flood_rules;
}

std::string metrics_line(const SweepResult& r) {
    const auto& m = r.metrics;
    const auto& c = m.counters;
    std::ostringstream os;
    os << "mode=" << to_string(r.mode) << " switches=" << r.switches << " producers=" << r.producers
       << " consumers=" << r.consumers << " setup_time_s=" << sim::format_seconds(m.setup_time)
       << " acks=" << c.positive_acks << " packet_ins=" << c.packet_ins
       << " flow_mods=" << c.flow_mods << " packet_outs=" << c.packet_outs
       << " frames=" << c.frames_sent << " events=" << m.events_processed;
    return os.str();
}

void write_file(const std::filesystem::path& path, const std::string& body) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open " + path.string() + " for writing");
    f << body;
    f.close();
    if (!f) throw IoError("failed writing " + path.string());
}

}  // namespace

ParseOutcome parse_args(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Discrete-event simulator of SOME/IP service discovery over Ethernet and SDN",
                 "soasim"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Print help for all subcommands");

    CliConfig cfg;
    TimingFlags timing;
    std::string mode = "sdn-optimized";

    auto* run = app.add_subcommand("run", "Simulate one scenario and print its setup time");
    run->add_option("--mode", mode, "ethernet, sdn-vanilla or sdn-optimized")
        ->capture_default_str()
        ->check(CLI::IsMember(kModeNames));
    run->add_option("--switches", cfg.scenario.switches, "Switches in the chain")
        ->capture_default_str()
        ->check(CLI::Range(1U, scenario::kMaxSwitches));
    run->add_option("--producers", cfg.scenario.producers, "Producer nodes on the first switch")
        ->capture_default_str()
        ->check(CLI::Range(1U, scenario::kMaxHosts));
    run->add_option("--consumers", cfg.scenario.consumers,
                    "Consumer nodes on the last switch, each subscribing to every producer")
        ->capture_default_str()
        ->check(CLI::Range(1U, scenario::kMaxHosts));
    run->add_option("--out", cfg.out, "Also write CSV files into this directory");
    run->add_option("--trace", cfg.trace_path, "Write the event trace to this file");
    add_timing(*run, timing);

    auto defaults = scenario::SweepGrid::defaults();
    std::vector<std::string> modes = kModeNames;
    cfg.grid = defaults;
    cfg.out = "results";
    auto* sweep = app.add_subcommand("sweep", "Run a parameter grid and write CSV files");
    sweep->add_option("--out", cfg.out, "Output directory")->capture_default_str();
    sweep->add_option("--modes", modes, "Modes to run")
        ->delimiter(',')
        ->capture_default_str()
        ->check(CLI::IsMember(kModeNames));
    sweep->add_option("--switches", cfg.grid.switches, "Switch counts")
        ->delimiter(',')
        ->capture_default_str()
        ->check(CLI::Range(1U, scenario::kMaxSwitches));
    sweep->add_option("--producers", cfg.grid.producers, "Producer counts")
        ->delimiter(',')
        ->capture_default_str()
        ->check(CLI::Range(1U, scenario::kMaxHosts));
    sweep->add_option("--consumers", cfg.grid.consumers, "Consumer counts")
        ->delimiter(',')
        ->capture_default_str()
        ->check(CLI::Range(1U, scenario::kMaxHosts));
    sweep->add_option("--jobs", cfg.jobs, "Parallel runs (0 = one per hardware thread)")
        ->capture_default_str();
    add_timing(*sweep, timing);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e, out, err);
        return {std::nullopt, kExitOk};
    } catch (const CLI::CallForAllHelp& e) {
        app.exit(e, out, err);
        return {std::nullopt, kExitOk};
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return {std::nullopt, kExitUsage};
    }

    apply_timing(timing, cfg.scenario);
    if (run->parsed()) {
        cfg.command = Command::Run;
        cfg.scenario.mode = *scenario::parse_mode(mode);
    } else {
        cfg.command = Command::Sweep;
        cfg.grid.modes.clear();
        for (const auto& m : modes) cfg.grid.modes.push_back(*scenario::parse_mode(m));
    }
    try {
        cfg.scenario.validate();
    } catch (const scenario::InvalidRangeError& e) {
        err << "error: " << e.what() << '\n';
        return {std::nullopt, kExitUsage};
    }
    return {cfg, kExitOk};
}

std::string sweep_csv(std::vector<SweepResult> results) {
    std::erase_if(results, [](const SweepResult& r) { return !r.ok(); });
    std::sort(results.begin(), results.end(), scenario::key_less);
    std::string s = "mode,switches,producers,consumers_per_producer,setup_time_s\n";
    for (const auto& r : results) {
        s += std::string(to_string(r.mode)) + ',' + std::to_string(r.switches) + ',' +
             std::to_string(r.producers) + ',' + std::to_string(r.consumers) + ',' +
             sim::format_seconds(r.metrics.setup_time) + '\n';
    }
    return s;
}

std::vector<std::filesystem::path> emit_csv(const std::vector<SweepResult>& results,
                                            const std::filesystem::path& dir) {
    std::map<std::tuple<std::string, std::uint32_t, std::uint32_t>,
             std::map<std::uint32_t, sim::SimTime>>
        series;
    for (const auto& r : results) {
        if (r.ok())
            series[{to_string(r.mode), r.switches, r.consumers}][r.producers] =
                r.metrics.setup_time;
    }
    if (series.empty()) throw IoError("no successful results to write");

    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());

    std::vector<std::filesystem::path> written;
    written.push_back(dir / "sweep.csv");
    write_file(written.back(), sweep_csv(results));
    for (const auto& [key, points] : series) {
        const auto& [mode, s, c] = key;
        std::string body = "x,y\n";
        for (const auto& [p, t] : points) {
            body += std::to_string(p) + ',' + sim::format_seconds(t) + '\n';
        }
        written.push_back(dir /
                          (mode + "_S=" + std::to_string(s) + "_C=" + std::to_string(c) + ".csv"));
        write_file(written.back(), body);
    }
    return written;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    const auto parsed = parse_args(argc, argv, out, err);
    if (!parsed.config) return parsed.exit_code;
    const auto& cfg = *parsed.config;

    try {
        if (cfg.command == Command::Run) {
            std::ofstream trace_file;
            if (!cfg.trace_path.empty()) {
                trace_file.open(cfg.trace_path, std::ios::trunc);
                if (!trace_file) throw IoError("cannot open " + cfg.trace_path + " for writing");
            }
            const auto r = scenario::run_scenario(cfg.scenario,
                                                  cfg.trace_path.empty() ? nullptr : &trace_file);
            out << metrics_line(r) << '\n';
            if (!cfg.out.empty()) emit_csv({r}, cfg.out);
            return kExitOk;
        }

        const auto results = scenario::run_sweep(cfg.grid, cfg.scenario, cfg.jobs);
        int failures = 0;
        for (const auto& r : results) {
            if (!r.ok()) {
                ++failures;
                err << "run failed: " << to_string(r.mode) << " S=" << r.switches
                    << " P=" << r.producers << " C=" << r.consumers << ": " << r.error << '\n';
            }
        }
        const auto files = emit_csv(results, cfg.out);
        out << "wrote " << files.size() << " files to " << cfg.out << " ("
            << results.size() - failures << " of " << results.size() << " runs)\n";
        return failures == 0 ? kExitOk : kExitRuntime;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
}

}  // namespace soasim::cli
