#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "soasim/scenario/config.hpp"
#include "soasim/sim/engine.hpp"

namespace soasim::scenario {

struct SweepResult {
    Mode mode{Mode::Ethernet};
    std::uint32_t switches{0};
    std::uint32_t producers{0};
    std::uint32_t consumers{0};
    sim::RunMetrics metrics;
    /// Empty on success.
    std::string error;

    [[nodiscard]] bool ok() const { return error.empty(); }
};

/// Orders by (mode name, switches, producers, consumers).
[[nodiscard]] bool key_less(const SweepResult& a, const SweepResult& b);

/// Builds and runs one scenario from a cold start. Throws sim::TimeoutError
/// and InvalidRangeError.
SweepResult run_scenario(const ScenarioConfig& config, std::ostream* trace = nullptr);

struct SweepGrid {
    std::vector<Mode> modes;
    std::vector<std::uint32_t> switches;
    std::vector<std::uint32_t> producers;
    std::vector<std::uint32_t> consumers;

    /// All three modes; S in {1,2,5}; P and C in {1,5,10,15,20,30,40,50}.
    static SweepGrid defaults();
    [[nodiscard]] std::size_t size() const {
        return modes.size() * switches.size() * producers.size() * consumers.size();
    }
};

/// Runs every grid point on up to `jobs` threads (0 = hardware concurrency).
/// Per-run failures land in SweepResult::error; results come back sorted.
std::vector<SweepResult> run_sweep(const SweepGrid& grid, const ScenarioConfig& base,
                                   unsigned jobs = 0);

}  // namespace soasim::scenario
