#include "soasim/scenario/config.hpp"

namespace soasim::scenario {

const char* to_string(Mode mode) {
    switch (mode) {
        case Mode::Ethernet: return "ethernet";
        case Mode::SdnVanilla: return "sdn-vanilla";
        case Mode::SdnOptimized: return "sdn-optimized";
    }
    return "?";
}

std::optional<Mode> parse_mode(std::string_view text) {
    for (Mode m : kAllModes) {
        if (text == to_string(m)) return m;
    }
    return std::nullopt;
}

namespace {

void check_range(const char* what, std::uint32_t value, std::uint32_t hi) {
    if (value < 1 || value > hi) {
        throw InvalidRangeError(std::string(what) + " = " + std::to_string(value) +
                                " is outside 1.." + std::to_string(hi));
    }
}

}  // namespace

void ScenarioConfig::validate() const {
    check_range("switches", switches, kMaxSwitches);
    check_range("producers", producers, kMaxHosts);
    check_range("consumers", consumers, kMaxHosts);
    if (timing.link_rate_bps == 0 || timing.control_link_rate_bps == 0) {
        throw InvalidRangeError("link rates must be positive");
    }
    if (timing.control_frame_bytes == 0) throw InvalidRangeError("control frame size is zero");
    if (offer_ttl == 0 || find_ttl == 0 || subscribe_ttl == 0) {
        throw InvalidRangeError("TTLs must be positive");
    }
    for (auto svc : unoffered_services) {
        if (svc == 0xFFFF || (svc > service_id_for(0) && svc <= service_id_for(producers))) {
            throw InvalidRangeError("unoffered service id collides with an offered one");
        }
    }
}

std::uint16_t service_id_for(std::uint32_t producer_index) {
    return static_cast<std::uint16_t>(0x1000 + producer_index);
}

}  // namespace soasim::scenario
