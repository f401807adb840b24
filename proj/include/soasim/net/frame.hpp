#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "soasim/sd/message.hpp"

namespace soasim::net {

using SwitchId = std::uint32_t;
using PortId = std::uint32_t;

/// A host or switch port on a specific switch.
struct Attachment {
    SwitchId switch_id{0};
    PortId port{0};

    auto operator<=>(const Attachment&) const = default;
};

/// 48-bit MAC address stored in the low bits.
struct MacAddress {
    std::uint64_t value{0};

    /// IPv4 multicast to MAC mapping (01:00:5e + low 23 bits).
    static constexpr MacAddress for_multicast(sd::Ipv4Address group) {
        return MacAddress{0x01005E000000ULL | (group.value & 0x7FFFFF)};
    }
    /// Locally administered unicast address derived from a host index.
    static constexpr MacAddress for_host(std::uint32_t index) {
        return MacAddress{0x020000000000ULL | index};
    }

    [[nodiscard]] constexpr bool is_group() const { return ((value >> 40) & 0x01) != 0; }
    [[nodiscard]] std::string to_string() const;

    auto operator<=>(const MacAddress&) const = default;
};

// Ethernet II + FCS + IPv4 + UDP + SOME/IP header.
inline constexpr std::uint32_t kFrameOverheadBytes = 14 + 4 + 20 + 8 + 16;
inline constexpr std::uint32_t kMinFrameBytes = 64;
inline constexpr std::uint32_t kControlFrameBytes = 128;

struct Frame {
    MacAddress src_mac;
    MacAddress dst_mac;
    sd::Endpoint src;
    sd::Endpoint dst;
    std::vector<std::uint8_t> payload;

    /// Bits on the wire, padded to the minimum Ethernet frame size.
    [[nodiscard]] std::uint64_t length_bits() const {
        const auto bytes = kFrameOverheadBytes + static_cast<std::uint32_t>(payload.size());
        return 8ULL * (bytes < kMinFrameBytes ? kMinFrameBytes : bytes);
    }

    bool operator==(const Frame&) const = default;
};

using FramePtr = std::shared_ptr<const Frame>;

}  // namespace soasim::net
