#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "soasim/ctrl/learning_controller.hpp"
#include "soasim/sim/time.hpp"

namespace soasim::scenario {

enum class Mode : std::uint8_t { Ethernet, SdnVanilla, SdnOptimized };

inline constexpr Mode kAllModes[] = {Mode::Ethernet, Mode::SdnVanilla, Mode::SdnOptimized};

/// "ethernet", "sdn-vanilla", "sdn-optimized".
[[nodiscard]] const char* to_string(Mode mode);
[[nodiscard]] std::optional<Mode> parse_mode(std::string_view text);

class InvalidRangeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct Timing {
    std::uint64_t link_rate_bps{1'000'000'000};
    std::uint64_t control_link_rate_bps{1'000'000'000};
    sim::SimTime propagation{0};
    sim::SimTime forwarding_delay{sim::microseconds(8)};
    sim::SimTime controller_processing{sim::microseconds(100)};
    sim::SimTime switch_processing{sim::microseconds(100)};
    std::uint32_t control_frame_bytes{128};
};

inline constexpr std::uint32_t kMaxSwitches = 5;
inline constexpr std::uint32_t kMaxHosts = 50;

struct ScenarioConfig {
    Mode mode{Mode::Ethernet};
    std::uint32_t switches{1};
    std::uint32_t producers{1};
    /// Consumer nodes; each subscribes to every producer.
    std::uint32_t consumers{1};
    Timing timing;
    std::uint32_t offer_ttl{3};
    std::uint32_t find_ttl{3};
    std::uint32_t subscribe_ttl{3};
    sim::SimTime limit{sim::seconds(10)};
    ctrl::LearningControllerOptions vanilla;
    /// Extra services every consumer looks for that nobody offers.
    std::vector<std::uint16_t> unoffered_services;

    /// Throws InvalidRangeError.
    void validate() const;
};

/// Service offered by producer `index` (1-based).
[[nodiscard]] std::uint16_t service_id_for(std::uint32_t producer_index);

}  // namespace soasim::scenario
