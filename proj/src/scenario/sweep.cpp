#include "soasim/scenario/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <string_view>
#include <thread>
#include <tuple>

#include "soasim/scenario/network.hpp"

namespace soasim::scenario {

bool key_less(const SweepResult& a, const SweepResult& b) {
    return std::tuple(std::string_view(to_string(a.mode)), a.switches, a.producers, a.consumers) <
           std::tuple(std::string_view(to_string(b.mode)), b.switches, b.producers, b.consumers);
}

SweepResult run_scenario(const ScenarioConfig& config, std::ostream* trace) {
    Network network(config, trace);
    network.start();
    SweepResult r;
    r.mode = config.mode;
    r.switches = config.switches;
    r.producers = config.producers;
    r.consumers = config.consumers;
    r.metrics = network.run();
    return r;
}

SweepGrid SweepGrid::defaults() {
    const std::vector<std::uint32_t> hosts{1, 5, 10, 15, 20, 30, 40, 50};
    return SweepGrid{{std::begin(kAllModes), std::end(kAllModes)}, {1, 2, 5}, hosts, hosts};
}

std::vector<SweepResult> run_sweep(const SweepGrid& grid, const ScenarioConfig& base,
                                   unsigned jobs) {
    std::vector<ScenarioConfig> points;
    points.reserve(grid.size());
    for (Mode m : grid.modes) {
        for (auto s : grid.switches) {
            for (auto p : grid.producers) {
                for (auto c : grid.consumers) {
                    ScenarioConfig cfg = base;
                    cfg.mode = m;
                    cfg.switches = s;
                    cfg.producers = p;
                    cfg.consumers = c;
                    points.push_back(std::move(cfg));
                }
            }
        }
    }

    std::vector<SweepResult> results(points.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < points.size(); i = next++) {
            const auto& cfg = points[i];
            try {
                results[i] = run_scenario(cfg);
            } catch (const std::exception& e) {
                results[i] =
                    SweepResult{cfg.mode, cfg.switches, cfg.producers, cfg.consumers, {}, e.what()};
                if (const auto* t = dynamic_cast<const sim::TimeoutError*>(&e)) {
                    results[i].metrics = t->partial();
                }
            }
        }
    };

    if (jobs == 0) jobs = std::max(1U, std::thread::hardware_concurrency());
    jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, points.size()));
    std::vector<std::thread> threads;
    for (unsigned j = 1; j < jobs; ++j) threads.emplace_back(worker);
    worker();
    for (auto& t : threads) t.join();

    std::sort(results.begin(), results.end(), key_less);
    return results;
}

}  // namespace soasim::scenario
